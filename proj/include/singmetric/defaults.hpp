#pragma once

/// Versioned pass/fail thresholds for the verification suites. Exact-engine
/// suites use zero tolerance; grid suites use the tol(N) formulas from the
/// grid engine. Bump the version when any value changes.

namespace singmetric::defaults {

inline constexpr const char* thresholds_version = "1";

// exact engines
inline constexpr double exact_tolerance = 0.0;

// monotone-limit: final ds gap at the family's limit index
inline constexpr double monotone_limit_final_gap = 1e-9;  // compared as 1/10^9 exactly

// sandwich / sdelta suites: mass floor delta
inline constexpr long sdelta_num = 1, sdelta_den = 10;  // delta = 0.1

// cauchy-decreasing: schedule constant floor (the empirical quasi-triangle
// constant is 1 in the exact engines, where the estimator is a true metric;
// the bound shape needs K > 1, so the schedule uses max(K_empirical, 2))
inline constexpr double cauchy_min_schedule_k = 2.0;

// grid suites
inline constexpr int grid_default_n = 256;
inline constexpr double stability_l1_final = 1e-2;
inline constexpr double stability_sup_final = 5e-2;
inline constexpr double ceiling_pointwise_slack = 1e-6;

// scaling suite: upper coefficient is (1+eps)^2 on the checked ratio
inline constexpr long scaling_eps_num[] = {1, 1, 1};
inline constexpr long scaling_eps_den[] = {4, 2, 1};

}  // namespace singmetric::defaults
