#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "singmetric/errors.hpp"
#include "singmetric/mass.hpp"
#include "singmetric/rational.hpp"

namespace singmetric::atomic {

/// Exact dimension-1 model: a singularity type is a vector of Lelong
/// numbers at marked points, inside a class of total mass `budget`.
/// All closed forms below depend only on the Lelong values; the marked
/// points are abstract identifiers (positions matter only on the grid).
struct AtomicSingularity {
  Rat budget{1};
  std::vector<std::string> points;
  std::vector<Rat> lelong;

  AtomicSingularity() = default;
  AtomicSingularity(Rat V, std::vector<std::string> pts, std::vector<Rat> nu)
      : budget(std::move(V)), points(std::move(pts)), lelong(std::move(nu)) {
    if (budget <= 0) throw ParseError("atomic budget must be positive");
    if (points.size() != lelong.size()) throw ParseError("points/lelong size mismatch");
    Rat total(0);
    for (const Rat& v : lelong) {
      if (v < 0) throw ParseError("negative Lelong number");
      total += v;
    }
    if (total > budget) throw ParseError("total Lelong mass exceeds the budget");
  }

  Rat lelong_total() const {
    Rat s(0);
    for (const Rat& v : lelong) s += v;
    return s;
  }

  friend bool operator==(const AtomicSingularity&, const AtomicSingularity&) = default;
};

inline void require_same_model(const AtomicSingularity& a, const AtomicSingularity& b) {
  if (a.budget != b.budget || a.points != b.points)
    throw BudgetMismatch("atomic types live over different budgets or point sets");
}

/// n = 1: m[0] = V - sum(nu) (non-pluripolar mass removes the atoms),
/// m[1] = V.
inline MassVector mass_vector(const AtomicSingularity& a) {
  MassVector mv;
  mv.n = 1;
  mv.budget = a.budget;
  mv.m = {a.budget - a.lelong_total(), a.budget};
  return mv;
}

/// LEQ means "a is more singular than b": componentwise nu_a >= nu_b.
inline Relation compare(const AtomicSingularity& a, const AtomicSingularity& b) {
  require_same_model(a, b);
  bool ab = true, ba = true;
  for (size_t i = 0; i < a.lelong.size(); ++i) {
    if (a.lelong[i] < b.lelong[i]) ab = false;
    if (b.lelong[i] < a.lelong[i]) ba = false;
  }
  if (ab) return Relation::LEQ;
  if (ba) return Relation::GEQ;
  return Relation::INCOMPARABLE;
}

/// max of potentials: componentwise min of Lelong numbers.
inline AtomicSingularity join(const AtomicSingularity& a, const AtomicSingularity& b) {
  require_same_model(a, b);
  AtomicSingularity out = a;
  for (size_t i = 0; i < out.lelong.size(); ++i) out.lelong[i] = std::min(a.lelong[i], b.lelong[i]);
  return out;
}

/// Rooftop envelope: componentwise max of Lelong numbers; leaves the model
/// when the combined mass would exceed the budget.
inline std::optional<AtomicSingularity> meet(const AtomicSingularity& a,
                                             const AtomicSingularity& b) {
  require_same_model(a, b);
  std::vector<Rat> nu(a.lelong.size());
  Rat total(0);
  for (size_t i = 0; i < nu.size(); ++i) {
    nu[i] = std::max(a.lelong[i], b.lelong[i]);
    total += nu[i];
  }
  if (total > a.budget) return std::nullopt;
  AtomicSingularity out = a;
  out.lelong = std::move(nu);
  return out;
}

/// Exact d_S of the model: (1/2) * l1 distance of the Lelong vectors.
/// Coincides with the comparable-case mass formula and with the join
/// decomposition estimate.
inline Rat ds(const AtomicSingularity& a, const AtomicSingularity& b) {
  require_same_model(a, b);
  Rat acc(0);
  for (size_t i = 0; i < a.lelong.size(); ++i) acc += abs_value(a.lelong[i] - b.lelong[i]);
  return acc / 2;
}

struct DiamondResult {
  Rat lhs, rhs;
  bool equal = false;
};

/// In dimension 1 the diamond mass inequality is an identity:
/// min + max = sum, pointwise in the Lelong data.
inline DiamondResult diamond_check(const AtomicSingularity& a, const AtomicSingularity& b) {
  auto m = meet(a, b);
  if (!m) throw MeetNonexistent("rooftop envelope leaves the model");
  DiamondResult r;
  r.lhs = mass_vector(a).m[0] + mass_vector(b).m[0];
  r.rhs = mass_vector(join(a, b)).m[0] + mass_vector(*m).m[0];
  r.equal = r.lhs == r.rhs;
  return r;
}

/// Smallest k >= 0 with |z^k|^2 |z|^{-2 nu} locally integrable: the stalk
/// of the multiplier ideal at the point is (z^k). k = nu for integer nu,
/// floor(nu) otherwise.
inline long multiplier_exponent(const Rat& nu) {
  BigInt num = numerator(nu), den = denominator(nu);
  BigInt q = num / den;  // floor for nonnegative nu
  return q.convert_to<long>();
}

inline std::vector<long> multiplier_exponents(const AtomicSingularity& a) {
  std::vector<long> out;
  out.reserve(a.lelong.size());
  for (const Rat& nu : a.lelong) out.push_back(multiplier_exponent(nu));
  return out;
}

/// First index j0 such that every later term satisfies the stalkwise
/// inclusion J[limit] subset J[seq_j], i.e. e_i(seq_j) <= e_i(limit).
/// The theorem guarantees existence for d_S-convergent sequences, so a
/// missing index is a model soundness failure.
inline size_t semicontinuity_check(const std::vector<AtomicSingularity>& seq,
                                   const AtomicSingularity& limit) {
  auto e_lim = multiplier_exponents(limit);
  auto ok_from = [&](size_t j0) {
    for (size_t j = j0; j < seq.size(); ++j) {
      auto e = multiplier_exponents(seq[j]);
      for (size_t i = 0; i < e.size(); ++i)
        if (e[i] > e_lim[i]) return false;
    }
    return true;
  };
  for (size_t j0 = 0; j0 < seq.size(); ++j0)
    if (ok_from(j0)) return j0;
  throw ModelSoundnessFailure("no semicontinuity index inside a d_S-convergent sequence");
}

struct SandwichResult {
  std::vector<AtomicSingularity> upper;  // decreasing in the singularity order
  std::vector<AtomicSingularity> lower;  // increasing; starts at first_lower_index
  size_t first_lower_index = 0;
};

/// Bracketing sequences for a Cauchy sequence: upper[j] is the
/// componentwise min over the tail (the usc sup of the potentials),
/// lower[j] the componentwise max over the tail (the tail rooftop
/// envelope), kept only from the first index where the tail max stays
/// within the budget.
inline SandwichResult sandwich_sequences(const std::vector<AtomicSingularity>& seq) {
  if (seq.empty()) return {};
  for (size_t j = 1; j < seq.size(); ++j) require_same_model(seq[0], seq[j]);
  size_t n = seq.size(), npts = seq[0].lelong.size();
  SandwichResult out;
  std::vector<std::vector<Rat>> tail_min(n), tail_max(n);
  tail_min[n - 1] = tail_max[n - 1] = seq[n - 1].lelong;
  for (size_t j = n - 1; j-- > 0;) {
    tail_min[j].resize(npts);
    tail_max[j].resize(npts);
    for (size_t i = 0; i < npts; ++i) {
      tail_min[j][i] = std::min(seq[j].lelong[i], tail_min[j + 1][i]);
      tail_max[j][i] = std::max(seq[j].lelong[i], tail_max[j + 1][i]);
    }
  }
  auto total = [](const std::vector<Rat>& nu) {
    Rat s(0);
    for (const Rat& v : nu) s += v;
    return s;
  };
  size_t j0 = n;
  for (size_t j = 0; j < n; ++j)
    if (total(tail_max[j]) <= seq[0].budget) {
      j0 = j;
      break;
    }
  if (j0 == n)
    throw BudgetExceeded("tail rooftop envelope never re-enters the model", static_cast<int>(n) - 1);
  out.first_lower_index = j0;
  for (size_t j = 0; j < n; ++j) {
    AtomicSingularity up = seq[j];
    up.lelong = tail_min[j];
    out.upper.push_back(std::move(up));
  }
  for (size_t j = j0; j < n; ++j) {
    AtomicSingularity lo = seq[j];
    lo.lelong = tail_max[j];
    out.lower.push_back(std::move(lo));
  }
  return out;
}

/// Transport into the class (1+eps)*theta: budget scales, atoms unchanged.
inline AtomicSingularity scaling_transport(const AtomicSingularity& a, const Rat& eps) {
  if (eps < 0 || eps > 1) throw ParseError("scaling transport needs eps in [0,1]");
  AtomicSingularity out = a;
  out.budget = (1 + eps) * a.budget;
  return out;
}

}  // namespace singmetric::atomic
