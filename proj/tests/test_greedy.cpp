#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tga/errors.hpp"
#include "tga/greedy.hpp"

using namespace tga;

namespace {

std::vector<Index> first(const std::vector<GreedyOrdering>& v) { return v.at(0).indices(); }

bool coef_close(const CoefVector& a, const CoefVector& b, double scale) {
  return max_abs_difference(a, b) <= 1e-12 * scale;
}

}  // namespace

TEST_CASE("greedy ordering examples") {
  CHECK(first(greedy_orderings({{1, 3.0}, {2, -2.0}, {3, 1.0}}, 3, TiePolicy::LowestIndexFirst)) ==
        std::vector<Index>{1, 2, 3});
  const auto tie = greedy_orderings({{1, 1.0}, {2, -1.0}}, 2, TiePolicy::Enumerate);
  REQUIRE(tie.size() == 2);
  CHECK(tie[0].indices() == std::vector<Index>{1, 2});
  CHECK(tie[1].indices() == std::vector<Index>{2, 1});
  CHECK(first(greedy_orderings({{4, 5.0}}, 3, TiePolicy::LowestIndexFirst)) == std::vector<Index>{4, 1, 2});
  CHECK_THROWS_AS(greedy_orderings({{1, 1.0}, {2, 1.0}}, 1, TiePolicy::LowestIndexFirst), DomainError);
}

TEST_CASE("ordering enumeration cap") {
  CoefVector x;
  for (Index n = 1; n <= 8; ++n) x.set(n, 1.0);  // 8! = 40320 orderings
  try {
    greedy_orderings(x, 8, TiePolicy::Enumerate);
    FAIL("expected a budget error");
  } catch (const BudgetError& e) {
    CHECK(e.partial_count() == kDefaultOrderingCap);
  }
  CHECK(greedy_orderings(x, 8, TiePolicy::Enumerate, 40320).size() == 40320);
  CHECK(count_greedy_orderings(x) == 40320);
}

TEST_CASE("invalid orderings are rejected") {
  const CoefVector x{{1, 3.0}, {2, 1.0}};
  CHECK_THROWS_AS(GreedyOrdering(x, {2, 1}), DomainError);
  CHECK_THROWS_AS(GreedyOrdering(x, {1}), DomainError);
  CHECK_THROWS_AS(GreedyOrdering(x, {1, 2, 2}), DomainError);
  CHECK_NOTHROW(GreedyOrdering(x, {1, 2, 7}));
}

TEST_CASE("greedy and Cesaro sums") {
  const GreedyOrdering o({{1, 3.0}, {2, -2.0}, {3, 1.0}}, {1, 2, 3});
  CHECK(greedy_sum(o, 2) == CoefVector{{1, 3.0}, {2, -2.0}});
  CHECK(greedy_sum(o, 0).empty());
  CHECK(greedy_sum(o, 3) == o.x());
  CHECK_THROWS_AS(greedy_sum(o, 4), DomainError);

  const GreedyOrdering c({{1, 4.0}, {2, 2.0}, {3, 1.0}}, {1, 2, 3});
  const auto c3 = cesaro_sum(c, 3);
  CHECK(c3[1] == 4.0);
  CHECK(c3[2] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(c3[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(cesaro_sum(GreedyOrdering({{1, 3.0}, {2, 2.0}, {3, 1.0}}, {1, 2, 3}), 1) == CoefVector{{1, 3.0}});
  CHECK(cesaro_sum(GreedyOrdering({{1, 3.0}, {2, 2.0}}, {1, 2}), 2) == CoefVector{{1, 3.0}, {2, 1.0}});
  CHECK_THROWS_AS(cesaro_sum(c, 0), DomainError);
}

TEST_CASE("de la Vallee-Poussin sums") {
  const GreedyOrdering o({{1, 3.0}, {2, 2.0}, {3, 1.0}}, {1, 2, 3});
  CHECK(vp_sum(o, 1) == CoefVector{{1, 3.0}, {2, 2.0}});
  const GreedyOrdering p({{1, 4.0}, {2, 2.0}, {3, 1.0}, {4, 0.5}}, {1, 2, 3, 4});
  const CoefVector expected{{1, 4.0}, {2, 2.0}, {3, 1.0}, {4, 0.25}};
  CHECK(coef_close(vp_sum(p, 2), expected, 4.0));
  CHECK_THROWS_AS(vp_sum(o, 2), DomainError);
  CHECK_THROWS_AS(vp_sum(o, 0), DomainError);
}

TEST_CASE("shifted orderings") {
  const GreedyOrdering o({{1, 3.0}, {2, 2.0}, {3, 1.0}}, {1, 2, 3});
  const auto s1 = shifted_ordering(o, 1);
  CHECK(s1.indices() == std::vector<Index>{2, 3});
  CHECK(s1.x() == CoefVector{{2, 2.0}, {3, 1.0}});
  CHECK(shifted_ordering(o, 0) == o);
  const GreedyOrdering t({{1, 1.0}, {2, 1.0}, {3, 0.5}}, {2, 1, 3});
  const auto s2 = shifted_ordering(t, 2);
  CHECK(s2.indices() == std::vector<Index>{3});
  CHECK(s2.x() == CoefVector{{3, 0.5}});
  CHECK_THROWS_AS(shifted_ordering(o, 3), DomainError);
}

TEST_CASE("oscillation, indicators, thresholds, domination, projections") {
  CHECK(osc({{1, 4.0}, {2, 2.0}}, {1, 2}) == 2.0);
  CHECK(osc({{1, 4.0}}, {}) == 1.0);
  CHECK(osc({{1, 5.0}, {2, 5.0}, {3, 5.0}}, {1, 3}) == 1.0);
  CHECK_THROWS_AS(osc({{1, 4.0}}, {1, 2}), DomainError);

  CHECK(indicator_sum({{1, 1}, {2, -1}}, {1, 2}) == CoefVector{{1, 1.0}, {2, -1.0}});
  CHECK(indicator_sum({{1, 1}}, {}).empty());
  CHECK(indicator_sum(SignPattern::constant({3, 5}), {3, 5}) == CoefVector{{3, 1.0}, {5, 1.0}});
  CHECK_THROWS_AS(indicator_sum({{1, 1}}, {2}), DomainError);

  const CoefVector q{{1, 1.0}, {2, 0.5}, {3, 0.2}};
  CHECK(threshold_set(q, 0.5) == IndexSet{1, 2});
  CHECK(threshold_set(q, 1.0) == IndexSet{1});
  CHECK(threshold_set({}, 0.3).empty());
  CHECK_THROWS_AS(threshold_set({{1, 2.0}}, 0.5), DomainError);
  CHECK_THROWS_AS(threshold_set(q, 0.0), DomainError);

  CHECK(dominates({{1, 3.0}}, {{2, 2.0}}));
  CHECK_FALSE(dominates({{1, 1.0}}, {{2, 2.0}}));
  CHECK(dominates({}, {{2, 2.0}}));

  const CoefVector x{{1, 3.0}, {2, 2.0}};
  CHECK(projection(x, {1}) == CoefVector{{1, 3.0}});
  CHECK(projection(x, {}).empty());
  CHECK(projection(x, {1, 2, 9}) == x);
  CHECK(complement_projection(x, {1}) == CoefVector{{2, 2.0}});
}

TEST_CASE("enumerated orderings equal the brute-force set of greedy permutations") {
  gen::Gen g(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = g.vec(7, 7, true);
    const auto listed = greedy_orderings(x, x.support_size(), TiePolicy::Enumerate);
    std::vector<std::vector<Index>> got;
    for (const auto& o : listed) got.push_back(o.indices());
    auto ref = oracle::greedy_permutations(x);
    std::sort(got.begin(), got.end());
    CHECK(got == ref);
    CHECK(count_greedy_orderings(x) == ref.size());
  }
}

TEST_CASE("prefixes of every ordering are greedy sets") {
  gen::Gen g(22);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = g.vec(8, 6, true);
    for (const auto& o : greedy_orderings(x, 8, TiePolicy::Enumerate)) {
      for (std::size_t m = 0; m <= o.size(); ++m) {
        const auto a = o.prefix(m);
        double inside = 1e300;
        double outside = 0.0;
        for (Index n = 1; n <= 8; ++n) {
          if (a.contains(n)) {
            inside = std::min(inside, std::fabs(x[n]));
          } else {
            outside = std::max(outside, std::fabs(x[n]));
          }
        }
        REQUIRE(inside >= outside);
        REQUIRE(is_greedy_set(x, a));
      }
    }
  }
}

TEST_CASE("distinct moduli give exactly one ordering") {
  gen::Gen g(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = g.vec(10, 10);
    CHECK(greedy_orderings(x, 12, TiePolicy::Enumerate).size() == 1);
  }
}

TEST_CASE("Cesaro sum is the mean of greedy sums") {
  gen::Gen g(24);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto x = g.vec(16, 12, trial % 3 == 0);
    const auto o = lowest_index_ordering(x, 16);
    const std::size_t n = g.integer(1, 16);
    const auto ref = oracle::cesaro_as_mean(x, o.indices(), n);
    REQUIRE(coef_close(cesaro_sum(o, n), ref, x.sup_norm()));
  }
}

TEST_CASE("tail decomposition and shifted Cesaro identities") {
  gen::Gen g(25);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto x = g.vec(16, 12, trial % 2 == 0);
    const auto o = lowest_index_ordering(x, 16);
    const std::size_t n = g.integer(1, 8);
    const auto vp = vp_sum(o, n);
    CoefVector tail;
    for (std::size_t j = 1; j <= n; ++j) {
      const Index k = o.indices()[n + j - 1];
      if (x[k] != 0.0) tail.set(k, (static_cast<double>(n + 1 - j) / n) * x[k]);
    }
    REQUIRE(coef_close(vp - greedy_sum(o, n), tail, x.sup_norm()));
    const auto shifted = shifted_ordering(o, n);
    REQUIRE(coef_close(vp, greedy_sum(o, n) + cesaro_sum(shifted, n), x.sup_norm()));
  }
}
