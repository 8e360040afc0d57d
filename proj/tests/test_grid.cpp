#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "singmetric/core.hpp"
#include "singmetric/grid.hpp"

using namespace singmetric;
using grid::Atom;
using grid::GridPotential;

namespace {

constexpr int N = 64;

// smooth cone member: small trigonometric ripple, sup-normalized
GridPotential ripple(double amp, int kx = 1, int ky = 1, double c = 1.0) {
  GridPotential u = grid::zero_potential(N, c);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      u.values[u.idx(i, j)] =
          amp * (std::cos(2.0 * M_PI * kx * i / N) + std::cos(2.0 * M_PI * ky * j / N));
  grid::sup_normalize(u);
  return u;
}

}  // namespace

TEST_CASE("np_mass of the zero potential is the budget, at every depth") {
  auto u = grid::zero_potential(N, 1.0);
  grid::SolverConfig cfg;
  for (double k : {0.01, 0.5, 3.0}) {
    cfg.trunc_depth = k;
    REQUIRE(grid::np_mass(u, cfg) == Catch::Approx(1.0).margin(1e-12));
  }
  auto v = grid::zero_potential(N, 2.5);
  REQUIRE(grid::np_mass(v) == Catch::Approx(2.5).margin(1e-12));
}

TEST_CASE("green function satisfies its defining equation") {
  auto G = grid::green_function(N, 10, 20);
  GridPotential g = grid::zero_potential(N, 1.0);
  g.values = G;
  double h2 = 1.0 / (static_cast<double>(N) * N);
  double mean = 0;
  for (double x : G) mean += x;
  REQUIRE(std::abs(mean) < 1e-8);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double expected = (i == 10 && j == 20) ? (1.0 / h2 - 1.0) : -1.0;
      REQUIRE(grid::laplacian(g, i, j) == Catch::Approx(expected).margin(1e-6));
    }
}

TEST_CASE("np_mass matches the atomic closed form on model potentials") {
  auto u1 = grid::model_potential(N, {{16, 16, 0.5}});
  REQUIRE(std::abs(grid::np_mass(u1) - 0.5) <= grid::grid_tol(N));
  auto u2 = grid::model_potential(N, {{16, 16, 0.3}, {48, 40, 0.2}});
  REQUIRE(std::abs(grid::np_mass(u2) - 0.5) <= grid::grid_tol(N));
  auto mv = mass_vector(u2);
  REQUIRE(mv.n == 1);
  REQUIRE(mv.m[1] == 1.0);
  REQUIRE(mv.tolerance == grid::grid_tol(N));
}

TEST_CASE("truncated mass is monotone in the depth") {
  auto u = grid::model_potential(N, {{12, 50, 0.4}});
  double prev = -1;
  for (double k = 0.01; k < 2.0; k *= 1.5) {
    double m = grid::np_mass_at_depth(u, k);
    REQUIRE(m >= prev - 1e-12);
    prev = m;
  }
}

TEST_CASE("cone membership check rejects a spike") {
  auto u = grid::zero_potential(N, 1.0);
  REQUIRE_NOTHROW(grid::require_in_cone(u));
  u.values[u.idx(5, 5)] = 0.5;  // a positive spike is not subharmonic
  REQUIRE_THROWS_AS(grid::require_in_cone(u), NotInCone);
}

TEST_CASE("rooftop: idempotence and inactive obstacle") {
  auto u = ripple(0.005);
  auto w = grid::rooftop(u, u);
  for (size_t p = 0; p < w.values.size(); ++p)
    REQUIRE(w.values[p] == Catch::Approx(u.values[p]).margin(1e-6));
  // min of two smooth cone members that is itself in the cone stays put
  auto v = ripple(0.004, 1, 2);
  GridPotential mn = u;
  for (size_t p = 0; p < mn.values.size(); ++p) mn.values[p] = std::min(u.values[p], v.values[p]);
  bool min_in_cone = true;
  try {
    grid::require_in_cone(mn);
  } catch (const NotInCone&) {
    min_in_cone = false;
  }
  if (min_in_cone) {
    auto r = grid::rooftop(u, v);
    for (size_t p = 0; p < r.values.size(); ++p)
      REQUIRE(r.values[p] == Catch::Approx(mn.values[p]).margin(1e-6));
  }
}

TEST_CASE("rooftop of two green multiples matches the dim-1 meet") {
  auto u = grid::model_potential(N, {{20, 20, 0.3}});
  auto v = grid::model_potential(N, {{20, 20, 0.5}});
  auto w = grid::rooftop(u, v);
  REQUIRE(w.atoms.size() == 1);
  REQUIRE(w.atoms[0].nu == 0.5);
  REQUIRE(std::abs(grid::np_mass(w) - 0.5) <= grid::grid_tol(N));
  // extremality: below both inputs, and dominating a shifted cone candidate
  for (size_t p = 0; p < w.values.size(); ++p) {
    REQUIRE(w.values[p] <= u.values[p] + 1e-8);
    REQUIRE(w.values[p] <= v.values[p] + 1e-8);
  }
  GridPotential cand = grid::model_potential(N, {{20, 20, 0.5}});
  double shift = 0;
  for (size_t p = 0; p < cand.values.size(); ++p)
    shift = std::max(shift, cand.values[p] - std::min(u.values[p], v.values[p]));
  for (double& x : cand.values) x -= shift;  // now a cone member below min(u, v)
  for (size_t p = 0; p < cand.values.size(); ++p)
    REQUIRE(cand.values[p] <= w.values[p] + 1e-6);
}

TEST_CASE("p_bracket of a bounded potential is the zero potential") {
  auto u = ripple(0.006);
  auto pb = grid::p_bracket(u);
  for (double x : pb.values) REQUIRE(std::abs(x) < 1e-5);
}

TEST_CASE("p_bracket preserves the mass of singular potentials") {
  auto u = grid::model_potential(N, {{30, 12, 0.4}});
  double m0 = grid::np_mass(u);
  auto pb = grid::p_bracket(u);
  REQUIRE(std::abs(grid::np_mass(pb) - m0) <= grid::grid_tol(N));
  for (double x : pb.values) REQUIRE(x <= 1e-9);

  // singular plus a smooth dent: same mass before and after
  auto r = ripple(0.004);
  GridPotential mix = u;
  for (size_t p = 0; p < mix.values.size(); ++p) mix.values[p] = u.values[p] + r.values[p];
  mix.background = 2.0;  // room for the summed curvature
  grid::sup_normalize(mix);
  auto pb2 = grid::p_bracket(mix);
  REQUIRE(std::abs(grid::np_mass(pb2) - grid::np_mass(mix)) <= grid::grid_tol(N));
}

TEST_CASE("ceiling: zero input, mass preservation, idempotence") {
  auto z = grid::zero_potential(N, 1.0);
  auto cz = grid::ceiling(z);
  for (double x : cz.values) REQUIRE(std::abs(x) < 1e-5);

  auto u = grid::model_potential(N, {{40, 24, 0.5}});
  auto cu = grid::ceiling(u);
  REQUIRE(std::abs(grid::np_mass(cu) - grid::np_mass(u)) <= grid::grid_tol(N));
  auto ccu = grid::ceiling(cu);
  double gap = 0;
  for (size_t p = 0; p < cu.values.size(); ++p)
    gap = std::max(gap, std::abs(ccu.values[p] - cu.values[p]));
  REQUIRE(gap < 2 * grid::grid_tol(N));
}

TEST_CASE("concentration estimate: equality and random smooth pairs") {
  auto u = ripple(0.005);
  auto rep = grid::concentration_check(u, u);
  REQUIRE(rep.worst_margin <= 1e-9);
  auto v = ripple(0.004, 2, 1);
  auto rep2 = grid::concentration_check(u, v);
  REQUIRE(rep2.violation_measure <= 10.0 / N);
  // phi and a constant shift of phi: max is phi, indicator reduces to it
  GridPotential shifted = u;
  for (double& x : shifted.values) x -= 0.25;
  auto rep3 = grid::concentration_check(u, shifted);
  REQUIRE(rep3.worst_margin <= 1e-9);
}

TEST_CASE("solve_cmae: flat data, green oracle and error paths") {
  std::vector<double> flat(static_cast<size_t>(N) * N, 1.0);
  auto psi0 = grid::solve_cmae({}, N, flat);
  for (double x : psi0.values) REQUIRE(std::abs(x) < 1e-10);

  std::vector<double> half(static_cast<size_t>(N) * N, 0.5);
  auto psi = grid::solve_cmae({{7, 9, 0.5}}, N, half);
  auto G = grid::green_function(N, 7, 9);
  double gmax = *std::max_element(G.begin(), G.end());
  for (size_t p = 0; p < psi.values.size(); ++p)
    REQUIRE(psi.values[p] == Catch::Approx(0.5 * (G[p] - gmax)).margin(1e-9));
  REQUIRE(std::abs(grid::np_mass(psi) - 0.5) <= grid::grid_tol(N));

  // determinism stands in for the uniqueness of the solution
  auto psi2 = grid::solve_cmae({{7, 9, 0.5}}, N, half);
  REQUIRE(psi.values == psi2.values);

  REQUIRE_THROWS_AS(grid::solve_cmae({{7, 9, 0.5}}, N, flat), IncompatibleData);
  REQUIRE_THROWS_AS(grid::solve_cmae({{7, 9, 1.5}}, N, half), SingularBudget);
}

TEST_CASE("solve_cmae with a localized density bump") {
  std::vector<double> f(static_cast<size_t>(N) * N, 0.0);
  double target = 0.7;
  double raw = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double dx = (i - N / 2.0) / N, dy = (j - N / 2.0) / N;
      f[static_cast<size_t>(i) * N + j] = std::exp(-80.0 * (dx * dx + dy * dy));
      raw += f[static_cast<size_t>(i) * N + j] / (static_cast<double>(N) * N);
    }
  for (double& x : f) x *= target / raw;
  auto psi = grid::solve_cmae({{50, 8, 0.3}}, N, f);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (grid::is_atom_cell(psi, i, j)) continue;
      REQUIRE(grid::laplacian(psi, i, j) ==
              Catch::Approx(f[psi.idx(i, j)] - 1.0).margin(1e-7));
    }
  REQUIRE(std::abs(grid::np_mass(psi) - target) <= grid::grid_tol(N));
}

TEST_CASE("grid compare and join work on the atom lists") {
  auto a = grid::model_potential(N, {{10, 10, 0.4}});
  auto b = grid::model_potential(N, {{10, 10, 0.2}});
  REQUIRE(compare(a, b) == Relation::LEQ);
  REQUIRE(compare(b, a) == Relation::GEQ);
  auto c = grid::model_potential(N, {{40, 40, 0.2}});
  REQUIRE(compare(a, c) == Relation::INCOMPARABLE);
  auto j = grid::join(a, b);
  REQUIRE(j.atoms.size() == 1);
  REQUIRE(j.atoms[0].nu == 0.2);
  for (size_t p = 0; p < j.values.size(); ++p)
    REQUIRE(j.values[p] == std::max(a.values[p], b.values[p]));
  // join of disjoint atoms drops both (min with the absent weight 0)
  auto jc = grid::join(a, c);
  REQUIRE(jc.atoms.empty());
}

TEST_CASE("stability_experiment: constant family has zero gaps") {
  std::vector<double> f(static_cast<size_t>(N) * N, 0.7);
  grid::CmaeInstance inst{{{12, 12, 0.3}}, f};
  auto rep = grid::stability_experiment({inst, inst}, inst, N);
  for (double g : rep.l1_gaps) REQUIRE(g < 1e-12);
  for (double g : rep.sup_gaps) REQUIRE(g < 1e-12);
}

TEST_CASE("scaling transport on the grid scales the budget") {
  auto u = grid::model_potential(N, {{12, 12, 0.3}});
  auto s = grid::scaling_transport(u, 1.0);
  REQUIRE(s.background == 2.0);
  REQUIRE(std::abs(grid::np_mass(s) - 1.7) <= 2 * grid::grid_tol(N));
}
