#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "singmetric/core.hpp"
#include "singmetric/defaults.hpp"
#include "singmetric/errors.hpp"
#include "singmetric/generators.hpp"
#include "singmetric/serialize.hpp"

namespace singmetric::suite {

using nlohmann::json;

struct Report {
  std::string suite;
  long trials = 0;
  long violations = 0;
  double worst_margin = 0.0;  // positive means a violated bound
  std::uint64_t seed = 0;
  long runtime_ms = 0;
  std::vector<json> artifacts;  // replayable counterexamples, empty on pass
  json notes = json::object();
};

inline json to_json(const Report& r) {
  json j;
  j["suite"] = r.suite;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  j["seed"] = r.seed;
  j["runtime_ms"] = r.runtime_ms;
  j["artifacts"] = r.artifacts;
  j["notes"] = r.notes;
  j["thresholds_version"] = defaults::thresholds_version;
  return j;
}

struct SuiteOptions {
  int grid_n = defaults::grid_default_n;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t idx) {
  // splitmix64 over seed ^ index: independent, replayable per-trial streams
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (idx + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace detail {

inline void record(Report& rep, double margin, bool violated, const json& artifact) {
  rep.worst_margin = std::max(rep.worst_margin, margin);
  if (violated) {
    ++rep.violations;
    if (rep.artifacts.size() < 5) rep.artifacts.push_back(artifact);
  }
}

// ---- diamond-toric: Thm on masses of max and rooftop envelope ----
inline void diamond_toric(Report& rep, long trials, std::uint64_t seed) {
  long strict = 0, envelope_empty = 0;
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto P = gen::random_ambient(rng);
    toric::ToricClass a(P, gen::random_body_in(rng, P));
    toric::ToricClass b(P, gen::random_body_in(rng, P));
    ++rep.trials;
    try {
      auto d = toric::diamond_check(a, b);
      if (d.strict) ++strict;
      json art;
      art["trial"] = t;
      art["seed"] = mix_seed(seed, t);
      art["a"] = io::to_json(a);
      art["b"] = io::to_json(b);
      record(rep, to_double(d.lhs - d.rhs), !d.holds, art);
    } catch (const EnvelopeNonexistent&) {
      ++envelope_empty;  // disjoint bodies: the envelope leaves the model
    }
  }
  rep.notes["strict_fraction"] = static_cast<double>(strict) / trials;
  rep.notes["envelope_nonexistent"] = envelope_empty;
}

// ---- diamond-dim1: equality of the diamond masses in dimension 1 ----
inline void diamond_dim1(Report& rep, long trials, std::uint64_t seed) {
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto a = gen::random_atomic(rng, 3, 1, Rat(1, 2));
    auto b = gen::random_atomic(rng, 3, 1, Rat(1, 2));
    ++rep.trials;
    auto d = atomic::diamond_check(a, b);
    json art;
    art["trial"] = t;
    art["a"] = io::to_json(a);
    art["b"] = io::to_json(b);
    record(rep, std::abs(to_double(d.lhs - d.rhs)), !d.equal, art);
  }
}

// ---- telescoping: additivity of ds along certified chains ----
inline void telescoping(Report& rep, long trials, std::uint64_t seed) {
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    json art;
    art["trial"] = t;
    Rat gap;
    if (t % 2 == 0) {
      auto P = gen::random_ambient(rng);
      auto chain = gen::nested_chain(rng, P, 3);
      gap = abs_value(ds_comparable(chain[0], chain[2]) -
                      (ds_comparable(chain[0], chain[1]) + ds_comparable(chain[1], chain[2])));
      art["engine"] = "toric";
      art["a"] = io::to_json(chain[0]);
      art["b"] = io::to_json(chain[1]);
      art["c"] = io::to_json(chain[2]);
    } else {
      auto x = gen::random_atomic(rng, 3, 1, Rat(1, 3));
      auto y = gen::random_atomic(rng, 3, 1, Rat(1, 3));
      auto z = gen::random_atomic(rng, 3, 1, Rat(1, 3));
      // componentwise sort gives a certified chain a >= b >= c
      std::vector<Rat> na(3), nb(3), nc(3);
      for (size_t i = 0; i < 3; ++i) {
        std::vector<Rat> v{x.lelong[i], y.lelong[i], z.lelong[i]};
        std::sort(v.begin(), v.end());
        nc[i] = v[0];
        nb[i] = v[1];
        na[i] = v[2];
      }
      atomic::AtomicSingularity a(1, x.points, na), b(1, x.points, nb), c(1, x.points, nc);
      gap = abs_value(ds_comparable(a, c) - (ds_comparable(a, b) + ds_comparable(b, c)));
      art["engine"] = "atomic";
      art["a"] = io::to_json(a);
      art["b"] = io::to_json(b);
      art["c"] = io::to_json(c);
    }
    ++rep.trials;
    record(rep, to_double(gap), gap != 0, art);
  }
}

// ---- monotone-limit: increasing families converge in ds ----
inline void monotone_limit(Report& rep, long trials, std::uint64_t seed) {
  const int J = 34;
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto limit = gen::random_atomic(rng, 3, 1, Rat(1, 3));
    Rat prev_gap(-1);
    bool monotone = true;
    Rat final_gap(0);
    for (int j = 1; j <= J; ++j) {
      std::vector<Rat> nu = limit.lelong;
      Rat factor = 1 + Rat(1, BigInt(1) << j);
      for (Rat& v : nu) v *= factor;
      atomic::AtomicSingularity uj(1, limit.points, nu);
      Rat gap = atomic::ds(uj, limit);
      if (prev_gap >= 0 && gap > prev_gap) monotone = false;
      prev_gap = gap;
      final_gap = gap;
    }
    ++rep.trials;
    bool bad = !monotone || final_gap >= Rat(1, 1000000000);
    json art;
    art["trial"] = t;
    art["limit"] = io::to_json(limit);
    art["final_gap"] = to_double(final_gap);
    record(rep, to_double(final_gap) - 1e-9, bad, art);
  }
}

// ---- cauchy-decreasing: tail rooftop sequence with the schedule bound ----
inline void cauchy_decreasing(Report& rep, long trials, std::uint64_t seed) {
  // empirical quasi-triangle constant over random triples; the estimator is
  // a true metric in the atomic model so this comes out 1, and the schedule
  // uses max(K_emp, 2) to keep the K/(K-1) bound shape meaningful
  double k_emp = 0;
  for (long t = 0; t < 200; ++t) {
    gen::Rng rng(mix_seed(seed ^ 0xABCDULL, t));
    auto a = gen::random_atomic(rng, 3, 1, Rat(3, 10));
    auto b = gen::random_atomic(rng, 3, 1, Rat(3, 10));
    auto c = gen::random_atomic(rng, 3, 1, Rat(3, 10));
    Rat den = ds_estimate(a, b) + ds_estimate(b, c);
    if (den > 0) k_emp = std::max(k_emp, to_double(ds_estimate(a, c) / den));
  }
  Rat K = k_emp > defaults::cauchy_min_schedule_k
              ? rat_from_string(std::to_string(k_emp * 1.01))
              : Rat(2);
  rep.notes["k_empirical"] = k_emp;
  rep.notes["k_schedule"] = to_double(K);
  const size_t len = 12;
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto cs = gen::atomic_cauchy(rng, len, K, 2);
    auto sw = atomic::sandwich_sequences(cs.seq);
    ++rep.trials;
    // v_j = rooftop envelope of the tail; bound ds(u_j, v_j) <= K^{1-j} K/(K-1)
    bool bad = sw.first_lower_index != 0;
    double margin = 0;
    for (size_t j = 0; !bad && j < len; ++j) {
      Rat bound = K * K / (K - 1);
      for (size_t p = 0; p < j; ++p) bound /= K;
      Rat d = atomic::ds(cs.seq[j], sw.lower[j]);
      margin = std::max(margin, to_double(d - bound));
      if (d > bound) bad = true;
    }
    json art;
    art["trial"] = t;
    art["limit"] = io::to_json(cs.limit);
    record(rep, margin, bad, art);
  }
}

// ---- sandwich: bracketing monotone sequences for Cauchy sequences ----
inline void sandwich(Report& rep, long trials, std::uint64_t seed) {
  Rat delta(defaults::sdelta_num, defaults::sdelta_den);
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto cs = gen::atomic_cauchy(rng, 15, 2, 2, delta);
    auto sw = atomic::sandwich_sequences(cs.seq);
    ++rep.trials;
    bool bad = false;
    // upper is decreasing, lower increasing (in the singularity order:
    // Lelong vectors componentwise non-decreasing resp. non-increasing)
    for (size_t j = 0; j + 1 < sw.upper.size(); ++j)
      for (size_t i = 0; i < 2; ++i)
        if (sw.upper[j].lelong[i] > sw.upper[j + 1].lelong[i]) bad = true;
    for (size_t j = 0; j + 1 < sw.lower.size(); ++j)
      for (size_t i = 0; i < 2; ++i)
        if (sw.lower[j].lelong[i] < sw.lower[j + 1].lelong[i]) bad = true;
    // bracketing: lower <= u_j <= upper in the singularity order
    for (size_t j = 0; j < cs.seq.size(); ++j)
      for (size_t i = 0; i < 2; ++i) {
        if (cs.seq[j].lelong[i] < sw.upper[j].lelong[i]) bad = true;
        size_t j0 = sw.first_lower_index;
        if (j >= j0 && cs.seq[j].lelong[i] > sw.lower[j - j0].lelong[i]) bad = true;
      }
    // convergence of the bracket in ds
    Rat first_gap = atomic::ds(sw.upper[sw.first_lower_index], sw.lower.front());
    Rat last_gap = atomic::ds(sw.upper.back(), sw.lower.back());
    if (last_gap > first_gap || last_gap > Rat(1, 1000000)) bad = true;
    json art;
    art["trial"] = t;
    art["limit"] = io::to_json(cs.limit);
    art["last_gap"] = to_double(last_gap);
    record(rep, to_double(last_gap) - 1e-6, bad, art);
  }
}

// ---- semicontinuity: multiplier exponents along convergent sequences ----
inline void semicontinuity(Report& rep, long trials, std::uint64_t seed) {
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto cs = gen::atomic_cauchy(rng, 20, 2, 3);
    ++rep.trials;
    json art;
    art["trial"] = t;
    art["limit"] = io::to_json(cs.limit);
    try {
      size_t j0 = atomic::semicontinuity_check(cs.seq, cs.limit);
      (void)j0;
      record(rep, 0.0, false, art);
    } catch (const ModelSoundnessFailure&) {
      record(rep, 1.0, true, art);
    }
  }
}

// ---- scaling: transported/original distance ratios in the toric model ----
inline void scaling(Report& rep, long trials, std::uint64_t seed) {
  long skipped = 0;
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto P = gen::random_ambient(rng);
    auto chain = gen::nested_chain(rng, P, 2);
    Rat d0 = ds_comparable(chain[0], chain[1]);
    if (d0 == 0) {
      ++skipped;
      continue;
    }
    ++rep.trials;
    bool bad = false;
    double margin = 0;
    json art;
    art["trial"] = t;
    art["a"] = io::to_json(chain[0]);
    art["b"] = io::to_json(chain[1]);
    for (int e = 0; e < 3; ++e) {
      Rat eps(defaults::scaling_eps_num[e], defaults::scaling_eps_den[e]);
      auto ta = toric::scaling_transport(chain[0], eps);
      auto tb = toric::scaling_transport(chain[1], eps);
      Rat ratio = ds_comparable(ta, tb) / d0;
      Rat hi = (1 + eps) * (1 + eps);
      if (ratio < 1 || ratio > hi) {
        bad = true;
        art["eps"] = rat_to_string(eps);
        art["ratio"] = rat_to_string(ratio);
      }
      margin = std::max(margin, std::max(to_double(1 - ratio), to_double(ratio - hi)));
    }
    record(rep, margin, bad, art);
  }
  rep.notes["skipped_zero_distance"] = skipped;
}

// ---- oracle-grid-vs-atomic: truncated mass against the closed form ----
inline void oracle_grid_vs_atomic(Report& rep, long trials, std::uint64_t seed,
                                  const SuiteOptions& opt) {
  int N = opt.grid_n;
  double tol = grid::grid_tol(N);
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto atoms = gen::random_grid_atoms(rng, N);
    auto u = grid::model_potential(N, atoms);
    double m = grid::np_mass(u);
    double nu = u.nu_total();
    double err = std::abs(m - (1.0 - nu));
    ++rep.trials;
    json art;
    art["trial"] = t;
    art["sidecar"] = io::sidecar_json(u);
    art["np_mass"] = m;
    art["oracle"] = 1.0 - nu;
    record(rep, err - tol, err > tol, art);
  }
  rep.notes["grid_n"] = N;
  rep.notes["tolerance"] = tol;
}

// ---- stability: the three grid families for the CMAE stability theorem ----
inline void stability(Report& rep, long trials, std::uint64_t seed, const SuiteOptions& opt) {
  int N = opt.grid_n;
  auto flat = [&](double v) { return std::vector<double>(static_cast<size_t>(N) * N, v); };
  auto check_trend = [&](const grid::StabilityReport& sr, json& art, bool& bad, double& margin) {
    for (size_t j = 3; j + 1 < sr.l1_gaps.size(); ++j)
      if (sr.l1_gaps[j + 1] > sr.l1_gaps[j] + 1e-12) bad = true;
    double l1 = sr.l1_gaps.back(), sup = sr.sup_gaps.back();
    if (l1 >= defaults::stability_l1_final || sup >= defaults::stability_sup_final) bad = true;
    margin = std::max(margin, std::max(l1 - defaults::stability_l1_final,
                                       sup - defaults::stability_sup_final));
    art["l1_gaps"] = sr.l1_gaps;
    art["sup_gaps"] = sr.sup_gaps;
  };
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    std::uniform_int_distribution<int> cell(N / 4, 3 * N / 4);
    grid::Atom x{cell(rng), cell(rng), 0.3};
    ++rep.trials;
    bool bad = false;
    double margin = 0;
    json art;
    art["trial"] = t;

    // family 1: constant data, all gaps must vanish
    grid::CmaeInstance base{{x}, flat(0.7)};
    auto sr1 = grid::stability_experiment({base, base, base, base, base}, base, N);
    for (double g : sr1.l1_gaps)
      if (g > 1e-12) bad = true;
    art["constant_l1"] = sr1.l1_gaps;

    // family 2: atom mass nu_j = 0.5 - 1/(10 j) -> 0.5, constant densities
    std::vector<grid::CmaeInstance> fam2;
    for (int j = 1; j <= 10; ++j) {
      double nu = 0.5 - 1.0 / (10.0 * j);
      fam2.push_back({{grid::Atom{x.i, x.j, nu}}, flat(1.0 - nu)});
    }
    grid::CmaeInstance lim2{{grid::Atom{x.i, x.j, 0.5}}, flat(0.5)};
    json a2;
    check_trend(grid::stability_experiment(fam2, lim2, N), a2, bad, margin);
    art["atom_family"] = a2;

    // family 3: fixed atom, high-frequency density perturbation of L1 size ~1/j
    std::vector<grid::CmaeInstance> fam3;
    int q = N / 4;
    for (int j = 1; j <= 10; ++j) {
      std::vector<double> f = flat(0.7);
      double amp = 0.5 / j;
      for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k)
          f[static_cast<size_t>(i) * N + k] +=
              amp * std::sin(2.0 * M_PI * q * i / N) * std::sin(2.0 * M_PI * q * k / N);
      fam3.push_back({{x}, std::move(f)});
    }
    grid::CmaeInstance lim3{{x}, flat(0.7)};
    json a3;
    check_trend(grid::stability_experiment(fam3, lim3, N), a3, bad, margin);
    art["density_family"] = a3;

    record(rep, margin, bad, art);
  }
  rep.notes["grid_n"] = N;
}

// ---- sdelta-completeness: mass convergence of decreasing families with a
// mass floor, plus the shrinking-family contrast case ----
inline void sdelta_completeness(Report& rep, long trials, std::uint64_t seed) {
  for (long t = 0; t < trials; ++t) {
    gen::Rng rng(mix_seed(seed, t));
    auto P = gen::random_ambient(rng);
    auto chain = gen::nested_chain(rng, P, 2);
    const auto& Q = chain[0].body;  // limit body
    const auto& B = chain[1].body;  // Q <= B, family Q_t = (1-t)Q + tB
    auto mQ = mass_vector(chain[0]);
    ++rep.trials;
    bool bad = false;
    double margin = 0;
    // exact mass differences along t = 2^-s, decreasing to 0 linearly in t
    Rat aQ = toric::area(Q), aB = toric::area(B), V = toric::mixed_area(Q, B);
    Rat alpha = 2 * (aQ - 2 * V + aB), beta = 4 * (V - aQ);
    Rat lin = abs_value(alpha) + beta;
    Rat prev_diff(-1);
    for (int s = 0; s <= 10; ++s) {
      Rat tpar(1, BigInt(1) << s);
      auto Qt = toric::minkowski_sum(toric::scale(1 - tpar, Q), toric::scale(tpar, B));
      toric::ToricClass ct(P, Qt);
      auto mt = mass_vector(ct);
      // decreasing family stays in S_delta for delta = limit mass
      if (!in_s_delta(ct, mQ.m[0])) bad = true;
      Rat diff = mt.m[0] - mQ.m[0];
      if (diff < 0) bad = true;
      if (prev_diff >= 0 && diff > prev_diff) bad = true;
      if (diff > tpar * lin) bad = true;
      // the middle mass entry is exactly linear in t
      Rat d1 = mt.m[1] - mQ.m[1];
      if (d1 != tpar * 2 * (toric::mixed_area(B, P) - toric::mixed_area(Q, P))) bad = true;
      margin = std::max(margin, to_double(diff - tpar * lin));
      prev_diff = diff;
    }
    json art;
    art["trial"] = t;
    art["limit"] = io::to_json(chain[0]);
    art["outer"] = io::to_json(chain[1]);
    record(rep, margin, bad, art);
  }

  // contrast case: Q_t = [0,1]x[0,t] has ds(Q_t, Q_s) = |t-s| (an
  // estimator-Cauchy family) yet exits every S_delta as t -> 0. This is the
  // finite-model shadow of the incompleteness example, not the example
  // itself.
  bool contrast_ok = true;
  for (int d = 1; d <= 4; ++d) {
    Rat delta(1, BigInt(1) << d);
    Rat tsmall = delta / 4;
    auto qt = gen::shrinking_family(tsmall);
    if (in_s_delta(qt, delta)) contrast_ok = false;
  }
  for (int s = 1; s <= 6; ++s) {
    Rat t1(1, BigInt(1) << s), t2(1, BigInt(1) << (s + 1));
    auto q1 = gen::shrinking_family(t1), q2 = gen::shrinking_family(t2);
    if (ds_comparable(q2, q1) != t1 - t2) contrast_ok = false;
  }
  if (!contrast_ok) {
    ++rep.violations;
    rep.worst_margin = std::max(rep.worst_margin, 1.0);
  }
  rep.notes["contrast_case"] = "finite-model shadow: shrinking family is estimator-Cauchy but exits every S_delta";
  rep.notes["contrast_ok"] = contrast_ok;
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "diamond-toric",   "diamond-dim1", "telescoping",          "monotone-limit",
      "cauchy-decreasing", "sandwich",   "semicontinuity",       "scaling",
      "stability",       "oracle-grid-vs-atomic", "sdelta-completeness"};
  return names;
}

inline Report run_suite(const std::string& name, long trials, std::uint64_t seed,
                        const SuiteOptions& opt = {}) {
  Report rep;
  rep.suite = name;
  rep.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  if (name == "diamond-toric")
    detail::diamond_toric(rep, trials, seed);
  else if (name == "diamond-dim1")
    detail::diamond_dim1(rep, trials, seed);
  else if (name == "telescoping")
    detail::telescoping(rep, trials, seed);
  else if (name == "monotone-limit")
    detail::monotone_limit(rep, trials, seed);
  else if (name == "cauchy-decreasing")
    detail::cauchy_decreasing(rep, trials, seed);
  else if (name == "sandwich")
    detail::sandwich(rep, trials, seed);
  else if (name == "semicontinuity")
    detail::semicontinuity(rep, trials, seed);
  else if (name == "scaling")
    detail::scaling(rep, trials, seed);
  else if (name == "stability")
    detail::stability(rep, trials, seed, opt);
  else if (name == "oracle-grid-vs-atomic")
    detail::oracle_grid_vs_atomic(rep, trials, seed, opt);
  else if (name == "sdelta-completeness")
    detail::sdelta_completeness(rep, trials, seed);
  else
    throw UnknownSuite("unknown suite: " + name);
  rep.runtime_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                         std::chrono::steady_clock::now() - t0)
                                         .count());
  return rep;
}

/// Reproducible instance generation for the CLI and tests. Multi-instance
/// profiles (chains, families, sequences) return all members.
inline std::vector<io::Handle> generate(const std::string& engine, const std::string& profile,
                                        std::uint64_t seed, const SuiteOptions& opt = {}) {
  gen::Rng rng(seed);
  std::vector<io::Handle> out;
  if (profile == "random-body") {
    auto P = gen::random_ambient(rng);
    out.push_back({toric::ToricClass(P, gen::random_body_in(rng, P))});
  } else if (profile == "nested-chain") {
    auto P = gen::random_ambient(rng);
    for (auto& c : gen::nested_chain(rng, P, 3)) out.push_back({std::move(c)});
  } else if (profile == "shrinking-family") {
    for (int s = 0; s <= 6; ++s) out.push_back({gen::shrinking_family(Rat(1, BigInt(1) << s))});
  } else if (profile == "atomic-random") {
    out.push_back({gen::random_atomic(rng)});
  } else if (profile == "atomic-cauchy") {
    for (auto& a : gen::atomic_cauchy(rng, 12, 2).seq) out.push_back({std::move(a)});
  } else if (profile == "grid-atomic") {
    int N = opt.grid_n;
    out.push_back({grid::model_potential(N, gen::random_grid_atoms(rng, N))});
  } else {
    throw UnknownProfile("unknown profile: " + profile);
  }
  (void)engine;
  return out;
}

}  // namespace singmetric::suite
