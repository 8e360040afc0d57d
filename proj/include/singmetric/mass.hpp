#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "singmetric/errors.hpp"
#include "singmetric/rational.hpp"

namespace singmetric {

/// The n+1 mixed masses of a singularity type. Index convention, fixed once
/// for the whole library: m[j] carries j factors of the ambient form and
/// n-j factors of the potential, so m[0] is the full Monge-Ampere mass of
/// the potential and m[n] is the total budget of the class.
template <class T>
struct MassVectorT {
  int n = 1;
  std::vector<T> m;  // size n+1, m[n] == budget
  T budget{};
  double tolerance = 0.0;  // 0 for the exact engines

  bool valid() const {
    if (n < 1 || static_cast<int>(m.size()) != n + 1) return false;
    if (!(m[n] == budget)) return false;
    for (const T& x : m)
      if (x < T(0) || x > budget) return false;
    return true;
  }
};

using MassVector = MassVectorT<Rat>;
using MassVectorD = MassVectorT<double>;

/// Certified ordering of two singularity types. LEQ means "more singular
/// than" (a <= b in the singularity order); equal types report LEQ.
enum class Relation { LEQ, GEQ, INCOMPARABLE };

template <class T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

/// d_S for comparable types: 1/(n+1) * sum_j |m_b[j] - m_a[j]|.
/// The caller certifies comparability; mass monotonicity then makes every
/// summand one-signed.
template <class T>
T ds_mass_formula(const MassVectorT<T>& a, const MassVectorT<T>& b) {
  T acc(0);
  for (int j = 0; j <= a.n; ++j) acc += abs_value<T>(b.m[j] - a.m[j]);
  return acc / T(a.n + 1);
}

/// Monge-Ampere energy of a singularity type: -m[n] + 1/(n+1) * sum_j m[j].
template <class T>
T energy_from_masses(const MassVectorT<T>& a) {
  T acc(0);
  for (int j = 0; j <= a.n; ++j) acc += a.m[j];
  return -a.m[a.n] + acc / T(a.n + 1);
}

/// S_delta membership: full mass at least delta.
template <class T, class S>
bool in_s_delta_mass(const MassVectorT<T>& a, const S& delta) {
  return a.m[0] >= T(delta);
}

inline MassVectorD to_double(const MassVector& a) {
  MassVectorD out;
  out.n = a.n;
  out.budget = to_double(a.budget);
  out.tolerance = a.tolerance;
  out.m.reserve(a.m.size());
  for (const Rat& x : a.m) out.m.push_back(to_double(x));
  return out;
}

}  // namespace singmetric
