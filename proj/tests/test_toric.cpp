#include <catch2/catch_amalgamated.hpp>

#include "singmetric/generators.hpp"
#include "singmetric/toric.hpp"

using namespace singmetric;
using toric::RationalPolygon;
using toric::Vec2;

namespace {

RationalPolygon poly(std::initializer_list<std::pair<long, long>> pts) {
  std::vector<Vec2> v;
  for (auto [x, y] : pts) v.push_back({Rat(x), Rat(y)});
  return RationalPolygon(std::move(v));
}

RationalPolygon unit_square() { return poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

RationalPolygon half_square() {
  std::vector<Vec2> v{{0, 0}, {Rat(1, 2), 0}, {Rat(1, 2), Rat(1, 2)}, {0, Rat(1, 2)}};
  return RationalPolygon(std::move(v));
}

// Independent Minkowski-sum oracle: the hull of all pairwise vertex sums.
// The production code merges edge fans instead; agreement of the two
// routes is the point of these tests.
RationalPolygon minkowski_oracle(const RationalPolygon& a, const RationalPolygon& b) {
  std::vector<Vec2> pts;
  for (const Vec2& p : a.v)
    for (const Vec2& q : b.v) pts.push_back(p + q);
  return RationalPolygon(std::move(pts));
}

}  // namespace

TEST_CASE("canonical form drops collinear and duplicate points") {
  RationalPolygon p(std::vector<Vec2>{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 2}, {0, 0}});
  REQUIRE(p.v.size() == 4);
  REQUIRE(toric::area(p) == Rat(4));
  REQUIRE(p.v[0] == Vec2{0, 0});  // lexicographically smallest first
  // counterclockwise orientation
  REQUIRE(toric::cross(p.v[0], p.v[1], p.v[2]) > 0);
}

TEST_CASE("degenerate bodies canonicalize to segments and points") {
  RationalPolygon seg(std::vector<Vec2>{{0, 0}, {2, 2}, {1, 1}});
  REQUIRE(seg.is_segment());
  REQUIRE(toric::area(seg) == 0);
  RationalPolygon pt(std::vector<Vec2>{{3, 4}, {3, 4}});
  REQUIRE(pt.is_point());
}

TEST_CASE("containment handles interior, boundary and degenerate bodies") {
  auto sq = unit_square();
  REQUIRE(toric::contains(sq, Vec2{Rat(1, 2), Rat(1, 2)}));
  REQUIRE(toric::contains(sq, Vec2{Rat(1), Rat(1, 2)}));
  REQUIRE(!toric::contains(sq, Vec2{Rat(2), Rat(0)}));
  REQUIRE(toric::contains(sq, half_square()));
  REQUIRE(!toric::contains(half_square(), sq));
}

TEST_CASE("minkowski sum agrees with the pairwise-sum hull oracle") {
  gen::Rng rng(20240817);
  for (int t = 0; t < 200; ++t) {
    auto P = gen::random_ambient(rng);
    auto a = gen::random_body_in(rng, P);
    auto b = gen::random_body_in(rng, P);
    auto merged = toric::minkowski_sum(a, b);
    auto oracle = minkowski_oracle(a, b);
    REQUIRE(merged == oracle);
  }
}

TEST_CASE("minkowski sum of degenerate bodies") {
  auto seg_x = poly({{0, 0}, {1, 0}});
  auto seg_y = poly({{0, 0}, {0, 1}});
  REQUIRE(toric::minkowski_sum(seg_x, seg_y) == unit_square());
  REQUIRE(toric::minkowski_sum(seg_x, seg_x) == poly({{0, 0}, {2, 0}}));
  auto pt = RationalPolygon(std::vector<Vec2>{{2, 3}});
  auto shifted = toric::minkowski_sum(unit_square(), pt);
  REQUIRE(shifted == poly({{2, 3}, {3, 3}, {3, 4}, {2, 4}}));
}

TEST_CASE("mixed areas: known values") {
  auto P = unit_square();
  REQUIRE(toric::mixed_area(P, P) == Rat(1));
  REQUIRE(toric::mixed_area(half_square(), P) == Rat(1, 2));
  // orthogonal unit segments: V = 1/2 (their sum is the unit square)
  auto seg_x = poly({{0, 0}, {1, 0}});
  auto seg_y = poly({{0, 0}, {0, 1}});
  REQUIRE(toric::mixed_area(seg_x, seg_y) == Rat(1, 2));
  REQUIRE(toric::mixed_area(seg_x, seg_x) == Rat(0));
}

TEST_CASE("mixed area is symmetric and monotone") {
  gen::Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    auto P = gen::random_ambient(rng);
    auto a = gen::random_body_in(rng, P);
    auto b = gen::random_body_in(rng, P);
    REQUIRE(toric::mixed_area(a, b) == toric::mixed_area(b, a));
    auto big = toric::hull_of_union(a, b);
    REQUIRE(toric::mixed_area(a, P) <= toric::mixed_area(big, P));
  }
}

TEST_CASE("mass vector of the worked example") {
  toric::ToricClass t(unit_square(), half_square());
  auto mv = mass_vector(t);
  REQUIRE(mv.n == 2);
  REQUIRE(mv.m[0] == Rat(1, 2));
  REQUIRE(mv.m[1] == Rat(1));
  REQUIRE(mv.m[2] == Rat(2));
  REQUIRE(mv.budget == Rat(2));
  REQUIRE(mv.valid());
  toric::ToricClass full(unit_square(), unit_square());
  auto mf = mass_vector(full);
  REQUIRE(mf.m == std::vector<Rat>{Rat(2), Rat(2), Rat(2)});
}

TEST_CASE("intersection: worked cases") {
  auto sq = unit_square();
  REQUIRE(*toric::intersect(sq, sq) == sq);
  // orthogonal boundary segments meet in the corner point
  auto seg_x = poly({{0, 0}, {1, 0}});
  auto seg_y = poly({{0, 0}, {0, 1}});
  auto corner = toric::intersect(seg_x, seg_y);
  REQUIRE(corner);
  REQUIRE(corner->is_point());
  REQUIRE(corner->v[0] == Vec2{0, 0});
  // overlapping rectangles
  std::vector<Vec2> r{{Rat(1, 4), 0}, {1, 0}, {1, 1}, {Rat(1, 4), 1}};
  auto cap = toric::intersect(half_square(), RationalPolygon(std::move(r)));
  REQUIRE(cap);
  REQUIRE(toric::area(*cap) == Rat(1, 8));
  // disjoint
  REQUIRE(!toric::intersect(half_square(), poly({{2, 2}, {3, 2}, {3, 3}})));
}

TEST_CASE("intersection against the membership oracle on random bodies") {
  gen::Rng rng(4242);
  for (int t = 0; t < 100; ++t) {
    auto P = gen::random_ambient(rng);
    auto a = gen::random_body_in(rng, P);
    auto b = gen::random_body_in(rng, P);
    auto cap = toric::intersect(a, b);
    if (cap) {
      REQUIRE(toric::contains(a, *cap));
      REQUIRE(toric::contains(b, *cap));
      // sampled points of both bodies inside the other must lie in the cap
      for (const Vec2& p : a.v)
        if (toric::contains(b, p)) REQUIRE(toric::contains(*cap, p));
    } else {
      for (const Vec2& p : a.v) REQUIRE(!toric::contains(b, p));
      for (const Vec2& p : b.v) REQUIRE(!toric::contains(a, p));
    }
  }
}

TEST_CASE("lattice laws for join and meet") {
  gen::Rng rng(99);
  for (int t = 0; t < 50; ++t) {
    auto P = gen::random_ambient(rng);
    toric::ToricClass a(P, gen::random_body_in(rng, P));
    toric::ToricClass b(P, gen::random_body_in(rng, P));
    auto j = toric::join(a, b);
    REQUIRE(toric::join(a, b) == toric::join(b, a));
    REQUIRE(toric::join(a, j) == j);  // absorption
    REQUIRE(compare(a, j) == Relation::LEQ);
    REQUIRE(compare(b, j) == Relation::LEQ);
    auto m = toric::meet(a, b);
    if (m) {
      REQUIRE(compare(*m, a) == Relation::LEQ);
      REQUIRE(compare(*m, b) == Relation::LEQ);
    }
  }
}

TEST_CASE("diamond inequality: strictness witness from orthogonal segments") {
  auto P = unit_square();
  toric::ToricClass a(P, poly({{0, 0}, {1, 0}}));
  toric::ToricClass b(P, poly({{0, 0}, {0, 1}}));
  auto d = toric::diamond_check(a, b);
  REQUIRE(d.lhs == Rat(0));
  REQUIRE(d.rhs == Rat(1));
  REQUIRE(d.holds);
  REQUIRE(d.strict);
}

TEST_CASE("diamond inequality on overlapping squares") {
  auto P = unit_square();
  toric::ToricClass a(P, half_square());
  std::vector<Vec2> r{{Rat(1, 4), 0}, {1, 0}, {1, 1}, {Rat(1, 4), 1}};
  toric::ToricClass b(P, RationalPolygon(std::move(r)));
  auto d = toric::diamond_check(a, b);
  REQUIRE(d.holds);
  REQUIRE(d.lhs == mass_vector(a).m[0] + mass_vector(b).m[0]);
}

TEST_CASE("shrinking family masses are linear in t") {
  for (int s = 0; s <= 6; ++s) {
    Rat t(1, BigInt(1) << s);
    auto qt = gen::shrinking_family(t);
    auto mv = mass_vector(qt);
    REQUIRE(mv.m[0] == 2 * t);
    REQUIRE(mv.m[1] == 1 + t);
    REQUIRE(mv.m[2] == Rat(2));
  }
}

TEST_CASE("scaling transport: worked example and identity") {
  toric::ToricClass t(unit_square(), half_square());
  REQUIRE(toric::scaling_transport(t, 0) == t);
  auto s = toric::scaling_transport(t, 1);
  REQUIRE(toric::area(s.ambient) == Rat(4));
  REQUIRE(toric::area(s.body) == Rat(9, 4));
  REQUIRE(mass_vector(s).m[0] == Rat(9, 2));
}

TEST_CASE("toric construction validates its inputs") {
  REQUIRE_THROWS_AS(toric::ToricClass(poly({{0, 0}, {1, 0}}), poly({{0, 0}})), ParseError);
  REQUIRE_THROWS_AS(toric::ToricClass(unit_square(), poly({{0, 0}, {2, 0}, {2, 2}})), ParseError);
}
