#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "tga/errors.hpp"
#include "tga/spaces.hpp"

using namespace tga;

namespace {

std::vector<SpaceSpec> catalog(std::size_t cap) {
  std::vector<SpaceSpec> out{SpaceSpec::lp(1, cap),
                             SpaceSpec::lp(2, cap),
                             SpaceSpec::lp(3.5, cap),
                             SpaceSpec::lp(std::numeric_limits<double>::infinity(), cap),
                             SpaceSpec::summing_c0(cap),
                             SpaceSpec::lorentz(WeightSequence::harmonic(), cap),
                             SpaceSpec::weighted_l1(WeightSequence::geometric(0.5), cap),
                             SpaceSpec::max_functionals({CoefVector{{1, 1.0}, {2, 1.0}, {3, 1.0}},
                                                         CoefVector{{2, 1.0}, {3, -1.0}}},
                                                        cap)};
  out.push_back(SpaceSpec::circ_renorm(SpaceSpec::lorentz(WeightSequence::harmonic(), cap)));
  out.push_back(SpaceSpec::circ_renorm(SpaceSpec::summing_c0(cap)));
  return out;
}

double reference_norm(const SpaceSpec& space, const CoefVector& x) {
  const auto a = oracle::dense(x, space.cap());
  const auto& fam = space.family();
  if (const auto* lp = std::get_if<LpFamily>(&fam)) return oracle::lp(a, lp->p);
  if (std::holds_alternative<SummingC0Family>(fam)) return oracle::summing(a);
  if (const auto* lz = std::get_if<LorentzFamily>(&fam)) return oracle::lorentz(a, [&](std::size_t n) { return lz->w(n); });
  if (const auto* wl = std::get_if<WeightedL1Family>(&fam)) return oracle::weighted(a, [&](std::size_t n) { return wl->w(n); });
  if (const auto* mf = std::get_if<MaxFunctionalsFamily>(&fam)) {
    double best = oracle::lp(a, std::numeric_limits<double>::infinity());
    for (const auto& f : mf->functionals) {
      double s = 0.0;
      for (const auto& [k, v] : f.entries()) s += v * a[k - 1];
      best = std::max(best, std::fabs(s));
    }
    return best;
  }
  const auto& cr = std::get<CircRenormFamily>(fam);
  return std::max(reference_norm(*cr.inner, x) / cr.inner->alpha().alpha1,
                  oracle::lp(a, std::numeric_limits<double>::infinity()));
}

}  // namespace

TEST_CASE("norm examples") {
  CHECK(SpaceSpec::lp(2).norm({{1, 3.0}, {2, -4.0}}) == doctest::Approx(5.0).epsilon(1e-15));
  const auto sc = SpaceSpec::summing_c0();
  CHECK(sc.norm({{1, 1.0}, {2, -1.0}, {3, 1.0}, {4, -1.0}}) == 1.0);
  CHECK(sc.norm({{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}}) == 4.0);
  CHECK(SpaceSpec::lorentz(WeightSequence::harmonic()).norm({{5, 2.0}, {9, 1.0}}) == 2.5);
  CHECK(SpaceSpec::lp(std::numeric_limits<double>::infinity()).norm({{3, -7.0}, {4, 2.0}}) == 7.0);
}

TEST_CASE("norm errors") {
  const auto s = SpaceSpec::lp(2, 8);
  CHECK_THROWS_AS(s.norm({{9, 1.0}}), DomainError);
  CHECK_THROWS_AS(SpaceSpec::lp(0.5), InputError);
  CHECK_THROWS_AS(SpaceSpec::lorentz(WeightSequence::explicit_values({1.0, 2.0}), 2), InputError);
  CHECK_THROWS_AS(SpaceSpec::max_functionals({}), InputError);
  CHECK_THROWS_AS(WeightSequence::parse("geometric(x)"), InputError);
}

TEST_CASE("weight tags") {
  CHECK(WeightSequence::parse("harmonic")(4) == 0.25);
  CHECK(WeightSequence::parse("geometric(0.5)")(3) == 0.125);
  CHECK(WeightSequence::parse("constant(2)")(10) == 2.0);
  CHECK(WeightSequence::parse("geometric(0.5)").tag() == "geometric(0.5)");
}

TEST_CASE("dual norm examples") {
  CHECK(SpaceSpec::lp(2).dual_norm(7) == 1.0);
  CHECK(SpaceSpec::summing_c0().dual_norm(3) == 2.0);
  CHECK(SpaceSpec::weighted_l1(WeightSequence::geometric(0.5)).dual_norm(3) == 8.0);
  CHECK(SpaceSpec::lorentz(WeightSequence::constant(2.0)).dual_norm(5) == 0.5);
}

TEST_CASE("summing basis dual norms match vertex enumeration of the tail cube") {
  for (std::size_t d = 1; d <= 6; ++d) {
    const auto s = SpaceSpec::summing_c0(d);
    for (std::size_t n = 1; n <= d; ++n) CHECK(s.dual_norm(n) == oracle::summing_dual_by_vertices(d, n));
  }
}

TEST_CASE("alpha constants") {
  const auto a = SpaceSpec::lp(2).alpha();
  CHECK(a.alpha1 == 1.0);
  CHECK(a.alpha2 == 1.0);
  CHECK(a.alpha3 == 1.0);
  const auto s = SpaceSpec::summing_c0().alpha();
  CHECK(s.alpha1 == 1.0);
  CHECK(s.alpha2 == 2.0);
  CHECK(s.alpha3 == 2.0);
  const auto c = SpaceSpec::circ_renorm(SpaceSpec::lorentz(WeightSequence::harmonic())).alpha();
  CHECK(c.alpha1 == 1.0);
  CHECK(c.alpha2 == 1.0);
  CHECK(c.alpha3 == 1.0);
  for (const auto& space : catalog(16)) {
    const auto al = space.alpha();
    CHECK(al.alpha3 <= al.alpha1 * al.alpha2 * (1 + 1e-12));
  }
}

TEST_CASE("max-functionals dual: vertex enumeration and simplex agree") {
  gen::Gen g(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<CoefVector> fs;
    const std::size_t count = g.integer(1, 3);
    for (std::size_t i = 0; i < count; ++i) fs.push_back(g.vec(4, 4));
    for (Index n = 1; n <= 4; ++n) {
      const auto v = max_functionals_dual(fs, n);
      const auto s = max_functionals_dual(fs, n, true);
      CHECK(s.route != DualRoute::VertexEnumeration);
      CHECK(v.value == doctest::Approx(s.value).epsilon(1e-9));
      CHECK(v.value <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("max-functionals dual closed cases") {
  // |a_1 + a_2| <= 1 and |a_k| <= 1: a_1 can still reach 1.
  CHECK(max_functionals_dual({CoefVector{{1, 1.0}, {2, 1.0}}}, 1).value == doctest::Approx(1.0));
  // |2 a_1| <= 1 forces |a_1| <= 1/2.
  CHECK(max_functionals_dual({CoefVector{{1, 2.0}}}, 1).value == doctest::Approx(0.5));
  // untouched index
  CHECK(max_functionals_dual({CoefVector{{1, 2.0}}}, 3).value == 1.0);
}

TEST_CASE("norms agree with reference formulas on random vectors") {
  gen::Gen g(1);
  for (const auto& space : catalog(12)) {
    for (int trial = 0; trial < 300; ++trial) {
      const auto x = g.vec(12, 12, trial % 2 == 0);
      CHECK(space.norm(x) == doctest::Approx(reference_norm(space, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("norm axioms on random samples") {
  gen::Gen g(2);
  for (const auto& space : catalog(24)) {
    INFO(space.label());
    for (int trial = 0; trial < 10000; ++trial) {
      const auto x = g.vec(24, 10);
      const auto y = g.vec(24, 10);
      const double nx = space.norm(x);
      const double ny = space.norm(y);
      REQUIRE(nx > 0.0);
      REQUIRE(space.norm(x + y) <= (nx + ny) * (1 + 1e-12));
      if (trial % 10 == 0) {
        const double c = g.uniform(-5.0, 5.0);
        REQUIRE(space.norm(c * x) == doctest::Approx(std::fabs(c) * nx).epsilon(1e-12));
      }
    }
    CHECK(space.norm(CoefVector{}) == 0.0);
  }
}

TEST_CASE("renormed space is sandwiched and normalized") {
  gen::Gen g(3);
  for (const auto& inner : {SpaceSpec::summing_c0(32), SpaceSpec::lorentz(WeightSequence::harmonic(), 32),
                            SpaceSpec::weighted_l1(WeightSequence::geometric(0.5), 32)}) {
    const auto circ = SpaceSpec::circ_renorm(inner);
    const auto a = inner.alpha();
    for (int trial = 0; trial < 2000; ++trial) {
      const auto x = g.vec(32, 12);
      const double n = inner.norm(x);
      const double c = circ.norm(x);
      CHECK(n / a.alpha1 <= c * (1 + 1e-12));
      CHECK(c <= a.alpha2 * n * (1 + 1e-12));
    }
    for (Index k = 1; k <= 32; ++k) {
      CHECK(circ.norm({{k, 1.0}}) == 1.0);
      CHECK(circ.dual_norm(k) == 1.0);
    }
  }
}

TEST_CASE("Lorentz norm is rearrangement and sign invariant") {
  gen::Gen g(4);
  const auto space = SpaceSpec::lorentz(WeightSequence::harmonic(), 20);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = g.vec(20, 10);
    std::vector<Index> target(20);
    std::iota(target.begin(), target.end(), 1);
    std::shuffle(target.begin(), target.end(), g.rng);
    CoefVector y;
    std::size_t i = 0;
    for (const auto& [n, v] : x.entries()) y.set(target[i++], g.sign() * v);
    CHECK(space.norm(y) == doctest::Approx(space.norm(x)).epsilon(1e-14));
  }
}

TEST_CASE("truncation keeps norms of short vectors") {
  gen::Gen g(5);
  for (const auto& space : catalog(16)) {
    const auto t = space.truncated(8);
    CHECK(t.cap() == 8);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = g.vec(8, 8);
      CHECK(t.norm(x) == doctest::Approx(space.norm(x)).epsilon(1e-14));
    }
  }
  CHECK(SpaceSpec::summing_c0(8).dual_norm(8) == 1.0);
  CHECK(SpaceSpec::summing_c0(8).dual_norm(7) == 2.0);
}

TEST_CASE("sign invariance flags") {
  CHECK(SpaceSpec::lp(2).sign_invariant());
  CHECK_FALSE(SpaceSpec::summing_c0().sign_invariant());
  CHECK(SpaceSpec::circ_renorm(SpaceSpec::lorentz(WeightSequence::harmonic())).sign_invariant());
  CHECK_FALSE(SpaceSpec::max_functionals({CoefVector{{1, 1.0}}}).sign_invariant());
}
