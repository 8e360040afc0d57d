#include <catch2/catch_amalgamated.hpp>

#include "singmetric/atomic.hpp"
#include "singmetric/generators.hpp"

using namespace singmetric;
using atomic::AtomicSingularity;

namespace {

AtomicSingularity two_point(const Rat& n1, const Rat& n2, Rat budget = 1) {
  return AtomicSingularity(std::move(budget), {"x1", "x2"}, {n1, n2});
}

}  // namespace

TEST_CASE("mass vector closed form") {
  auto a = two_point(Rat(3, 10), Rat(1, 5));
  auto mv = mass_vector(a);
  REQUIRE(mv.n == 1);
  REQUIRE(mv.m[0] == Rat(1, 2));
  REQUIRE(mv.m[1] == Rat(1));
  REQUIRE(mv.valid());
}

TEST_CASE("construction validates budget and signs") {
  REQUIRE_THROWS_AS(two_point(Rat(3, 4), Rat(1, 2)), ParseError);
  REQUIRE_THROWS_AS(two_point(Rat(-1, 4), Rat(1, 2)), ParseError);
  REQUIRE_THROWS_AS(AtomicSingularity(0, {"x1"}, {Rat(0)}), ParseError);
  REQUIRE_THROWS_AS(AtomicSingularity(1, {"x1", "x2"}, {Rat(0)}), ParseError);
}

TEST_CASE("join and meet are componentwise min and max") {
  auto a = two_point(Rat(3, 10), Rat(1, 5));
  auto b = two_point(Rat(1, 10), Rat(1, 2));
  auto j = atomic::join(a, b);
  REQUIRE(j.lelong == std::vector<Rat>{Rat(1, 10), Rat(1, 5)});
  auto m = atomic::meet(a, b);
  REQUIRE(m);
  REQUIRE(m->lelong == std::vector<Rat>{Rat(3, 10), Rat(1, 2)});
  // meet leaves the model when the combined mass exceeds the budget
  auto big1 = two_point(Rat(3, 5), Rat(0));
  auto big2 = two_point(Rat(0), Rat(3, 5));
  REQUIRE(!atomic::meet(big1, big2));
}

TEST_CASE("ds worked examples") {
  REQUIRE(atomic::ds(two_point(Rat(3, 10), Rat(1, 5)), two_point(Rat(1, 10), Rat(1, 2))) ==
          Rat(1, 4));
  AtomicSingularity a(1, {"x1"}, {Rat(1, 2)});
  AtomicSingularity b(1, {"x1"}, {Rat(1, 5)});
  REQUIRE(atomic::ds(a, b) == Rat(3, 20));
  REQUIRE(compare(a, b) == Relation::LEQ);
}

TEST_CASE("ds is a metric on random instances") {
  gen::Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    auto a = gen::random_atomic(rng);
    auto b = gen::random_atomic(rng);
    auto c = gen::random_atomic(rng);
    REQUIRE(atomic::ds(a, b) == atomic::ds(b, a));
    REQUIRE(atomic::ds(a, a) == 0);
    REQUIRE(atomic::ds(a, c) <= atomic::ds(a, b) + atomic::ds(b, c));
    REQUIRE((atomic::ds(a, b) == 0) == (a.lelong == b.lelong));
  }
}

TEST_CASE("diamond identity in dimension 1") {
  auto a = two_point(Rat(3, 10), Rat(1, 5));
  auto b = two_point(Rat(1, 10), Rat(1, 2));
  auto d = atomic::diamond_check(a, b);
  REQUIRE(d.equal);
  REQUIRE(d.lhs == Rat(1, 2) + Rat(2, 5));
  REQUIRE(d.rhs == Rat(7, 10) + Rat(1, 5));
  gen::Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    auto x = gen::random_atomic(rng, 3, 1, Rat(1, 2));
    auto y = gen::random_atomic(rng, 3, 1, Rat(1, 2));
    REQUIRE(atomic::diamond_check(x, y).equal);
  }
}

TEST_CASE("meet mismatch throws") {
  auto a = two_point(Rat(1, 10), Rat(1, 5));
  AtomicSingularity other(2, {"x1", "x2"}, {Rat(1, 10), Rat(1, 5)});
  REQUIRE_THROWS_AS(atomic::ds(a, other), BudgetMismatch);
  AtomicSingularity renamed(1, {"y1", "y2"}, {Rat(1, 10), Rat(1, 5)});
  REQUIRE_THROWS_AS(atomic::join(a, renamed), BudgetMismatch);
}

TEST_CASE("multiplier exponents: floor with integer agreement") {
  REQUIRE(atomic::multiplier_exponent(Rat(0)) == 0);
  REQUIRE(atomic::multiplier_exponent(Rat(1, 2)) == 0);
  REQUIRE(atomic::multiplier_exponent(Rat(1)) == 1);
  REQUIRE(atomic::multiplier_exponent(Rat(23, 10)) == 2);
  REQUIRE(atomic::multiplier_exponent(Rat(3)) == 3);
}

TEST_CASE("semicontinuity index exists for convergent sequences") {
  // nu_j = nu (1 - 1/(j+2)) increasing to nu = 1: exponents 0 below, 1 at the limit
  AtomicSingularity limit(2, {"x1"}, {Rat(1)});
  std::vector<AtomicSingularity> seq;
  for (int j = 0; j < 10; ++j)
    seq.emplace_back(2, std::vector<std::string>{"x1"}, std::vector<Rat>{1 - Rat(1, j + 2)});
  REQUIRE(atomic::semicontinuity_check(seq, limit) == 0);
  // crossing an integer from above: inclusion only holds from the tail
  std::vector<AtomicSingularity> seq2;
  for (int j = 0; j < 10; ++j)
    seq2.emplace_back(2, std::vector<std::string>{"x1"}, std::vector<Rat>{1 + Rat(1, j + 1)});
  AtomicSingularity lim2(2, {"x1"}, {Rat(1)});
  size_t j0 = atomic::semicontinuity_check(seq2, lim2);
  REQUIRE(j0 == 1);  // j = 0 has nu = 2 (exponent 2); from j = 1 on, exponent 1
  // a sequence sitting above the next integer violates inclusion until it dips
  std::vector<AtomicSingularity> seq3;
  seq3.emplace_back(3, std::vector<std::string>{"x1"}, std::vector<Rat>{Rat(21, 10)});
  seq3.emplace_back(3, std::vector<std::string>{"x1"}, std::vector<Rat>{Rat(19, 10)});
  AtomicSingularity lim3(3, {"x1"}, {Rat(19, 10)});
  REQUIRE(atomic::semicontinuity_check(seq3, lim3) == 1);
}

TEST_CASE("sandwich sequences bracket and are monotone") {
  gen::Rng rng(123);
  for (int t = 0; t < 50; ++t) {
    auto cs = gen::atomic_cauchy(rng, 12, 2);
    auto sw = atomic::sandwich_sequences(cs.seq);
    REQUIRE(sw.upper.size() == cs.seq.size());
    for (size_t j = 0; j + 1 < sw.upper.size(); ++j)
      for (size_t i = 0; i < 2; ++i)
        REQUIRE(sw.upper[j].lelong[i] <= sw.upper[j + 1].lelong[i]);
    for (size_t j = 0; j + 1 < sw.lower.size(); ++j)
      for (size_t i = 0; i < 2; ++i)
        REQUIRE(sw.lower[j].lelong[i] >= sw.lower[j + 1].lelong[i]);
    for (size_t j = sw.first_lower_index; j < cs.seq.size(); ++j)
      for (size_t i = 0; i < 2; ++i) {
        REQUIRE(sw.upper[j].lelong[i] <= cs.seq[j].lelong[i]);
        REQUIRE(sw.lower[j - sw.first_lower_index].lelong[i] >= cs.seq[j].lelong[i]);
      }
  }
}

TEST_CASE("sandwich on a constant sequence is the sequence itself") {
  auto a = two_point(Rat(1, 5), Rat(1, 10));
  std::vector<AtomicSingularity> seq(5, a);
  auto sw = atomic::sandwich_sequences(seq);
  REQUIRE(sw.first_lower_index == 0);
  for (const auto& u : sw.upper) REQUIRE(u.lelong == a.lelong);
  for (const auto& u : sw.lower) REQUIRE(u.lelong == a.lelong);
}

TEST_CASE("scaling transport scales the budget only") {
  auto a = two_point(Rat(1, 2), Rat(1, 4));
  auto s = atomic::scaling_transport(a, 1);
  REQUIRE(s.budget == Rat(2));
  REQUIRE(s.lelong == a.lelong);
  REQUIRE(mass_vector(s).m[0] == Rat(5, 4));
}
