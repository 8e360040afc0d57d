#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "singmetric/atomic.hpp"
#include "singmetric/errors.hpp"
#include "singmetric/grid.hpp"
#include "singmetric/toric.hpp"

namespace singmetric::gen {

using Rng = std::mt19937_64;

/// Random rational in [lo, hi] with denominator at most max_den; the small
/// denominator bound keeps rational growth tame through hulls and sums.
inline Rat random_rat(Rng& rng, long lo = 0, long hi = 1, long max_den = 64) {
  std::uniform_int_distribution<long> den_dist(1, max_den);
  long q = den_dist(rng);
  std::uniform_int_distribution<long> num_dist(lo * q, hi * q);
  return Rat(num_dist(rng), q);
}

inline toric::Vec2 random_point_in(Rng& rng, const toric::RationalPolygon& p) {
  Rat xlo = p.v[0].x, xhi = p.v[0].x, ylo = p.v[0].y, yhi = p.v[0].y;
  for (const auto& q : p.v) {
    xlo = std::min(xlo, q.x);
    xhi = std::max(xhi, q.x);
    ylo = std::min(ylo, q.y);
    yhi = std::max(yhi, q.y);
  }
  std::uniform_int_distribution<long> den_dist(1, 64);
  for (;;) {
    long qx = den_dist(rng), qy = den_dist(rng);
    auto pick = [&](const Rat& lo, const Rat& hi, long den) {
      long a = (numerator(lo * den) / denominator(lo * den)).convert_to<long>();
      long b = (numerator(hi * den) / denominator(hi * den)).convert_to<long>() + 1;
      std::uniform_int_distribution<long> d(a, b);
      return Rat(d(rng), den);
    };
    toric::Vec2 pt{pick(xlo, xhi, qx), pick(ylo, yhi, qy)};
    if (toric::contains(p, pt)) return pt;
  }
}

/// Convex hull of k uniform rational points inside the ambient polytope.
inline toric::RationalPolygon random_body_in(Rng& rng, const toric::RationalPolygon& ambient,
                                             int kmin = 3, int kmax = 10) {
  std::uniform_int_distribution<int> k_dist(kmin, kmax);
  int k = k_dist(rng);
  std::vector<toric::Vec2> pts;
  pts.reserve(k);
  for (int i = 0; i < k; ++i) pts.push_back(random_point_in(rng, ambient));
  return toric::RationalPolygon(std::move(pts));
}

/// Random ambient polytope with positive area: hull of a handful of points
/// with small coordinates.
inline toric::RationalPolygon random_ambient(Rng& rng) {
  for (;;) {
    std::uniform_int_distribution<int> k_dist(3, 6);
    std::uniform_int_distribution<long> c_dist(0, 32);
    int k = k_dist(rng);
    std::vector<toric::Vec2> pts;
    for (int i = 0; i < k; ++i) pts.push_back({Rat(c_dist(rng), 8), Rat(c_dist(rng), 8)});
    toric::RationalPolygon p(std::move(pts));
    if (toric::area(p) > 0) return p;
  }
}

inline toric::ToricClass random_toric(Rng& rng, const toric::RationalPolygon& ambient) {
  return toric::ToricClass(ambient, random_body_in(rng, ambient));
}

/// Certified nested chain Q1 <= Q2 <= ... <= Qk via hulls of unions.
inline std::vector<toric::ToricClass> nested_chain(Rng& rng, const toric::RationalPolygon& ambient,
                                                   int length = 3) {
  std::vector<toric::ToricClass> chain;
  toric::RationalPolygon body = random_body_in(rng, ambient);
  chain.emplace_back(ambient, body);
  for (int i = 1; i < length; ++i) {
    body = toric::hull_of_union(body, random_body_in(rng, ambient));
    chain.emplace_back(ambient, body);
  }
  return chain;
}

/// The shrinking toric family Q_t = [0,1] x [0,t] inside P = [0,1]^2 whose
/// mass goes to zero: the contrast case for the S_delta restriction.
inline toric::ToricClass shrinking_family(const Rat& t) {
  using toric::Vec2;
  toric::RationalPolygon P(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  toric::RationalPolygon Q(std::vector<Vec2>{{0, 0}, {1, 0}, {Rat(1), t}, {Rat(0), t}});
  return toric::ToricClass(P, Q);
}

inline std::vector<std::string> default_points(size_t n) {
  std::vector<std::string> pts;
  for (size_t i = 0; i < n; ++i) pts.push_back("x" + std::to_string(i + 1));
  return pts;
}

/// Random atomic type over a fixed point list; total Lelong mass capped at
/// cap * budget.
inline atomic::AtomicSingularity random_atomic(Rng& rng, size_t npts = 3, const Rat& budget = 1,
                                               const Rat& cap = Rat(9, 10)) {
  std::vector<Rat> nu(npts);
  Rat total(0);
  for (auto& v : nu) {
    v = random_rat(rng);
    total += v;
  }
  Rat limit = cap * budget;
  if (total > limit) {
    // scale back into the budget, keeping exact rationals
    for (auto& v : nu) v = v * limit / total;
  }
  return atomic::AtomicSingularity(budget, default_points(npts), nu);
}

struct CauchySequence {
  std::vector<atomic::AtomicSingularity> seq;
  atomic::AtomicSingularity limit;
};

/// Cauchy sequence in the atomic model with ds(u_j, u_{j+1}) <= K^{-2j}:
/// alternating perturbations of a fixed limit with geometrically shrinking
/// amplitude.
inline CauchySequence atomic_cauchy(Rng& rng, size_t length, const Rat& schedule_base,
                                    size_t npts = 2, const Rat& min_mass = Rat(0)) {
  for (;;) {
    atomic::AtomicSingularity limit = random_atomic(rng, npts, 1, Rat(1, 2));
    if (mass_vector(limit).m[0] < min_mass + Rat(1, 8)) continue;
    std::vector<atomic::AtomicSingularity> seq;
    Rat amp = Rat(1, 4);  // ds(u_j, u_{j+1}) <= amp*(K^{-2j}+K^{-2j-2}) <= K^{-2j}
    Rat kpow(1);
    Rat k2 = schedule_base * schedule_base;
    bool ok = true;
    for (size_t j = 0; j < length; ++j) {
      std::vector<Rat> nu = limit.lelong;
      Rat delta = amp * kpow * (j % 2 == 0 ? 1 : -1);
      for (auto& v : nu) {
        v += delta / Rat(static_cast<long>(npts));
        if (v < 0) v = 0;
      }
      try {
        seq.emplace_back(limit.budget, limit.points, nu);
      } catch (const ParseError&) {
        ok = false;
        break;
      }
      if (mass_vector(seq.back()).m[0] < min_mass) {
        ok = false;
        break;
      }
      kpow /= k2;
    }
    if (ok) return {std::move(seq), std::move(limit)};
  }
}

/// Seeded atom configurations for the grid oracle: up to max_atoms distinct
/// cells, weights in [0.1, 0.2] so the total stays at most 0.8.
inline std::vector<grid::Atom> random_grid_atoms(Rng& rng, int N, int max_atoms = 4) {
  std::uniform_int_distribution<int> count_dist(1, max_atoms);
  std::uniform_int_distribution<int> cell_dist(0, N - 1);
  std::uniform_int_distribution<int> nu_dist(100, 200);
  int count = count_dist(rng);
  std::vector<grid::Atom> atoms;
  while (static_cast<int>(atoms.size()) < count) {
    grid::Atom a{cell_dist(rng), cell_dist(rng), nu_dist(rng) / 1000.0};
    bool dup = false;
    for (const grid::Atom& b : atoms) dup = dup || (a.i == b.i && a.j == b.j);
    if (!dup) atoms.push_back(a);
  }
  return atoms;
}

}  // namespace singmetric::gen
