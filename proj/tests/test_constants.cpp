#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include "oracles.hpp"
#include "tga/constants.hpp"
#include "tga/errors.hpp"
#include "tga/greedy.hpp"

using namespace tga;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Every vector over {0, +-1, +-1/2}^d having a coefficient of modulus 1 (no sign reduction).
std::vector<CoefVector> raw_family(std::size_t d) {
  std::vector<CoefVector> out;
  const double vals[] = {0.0, 1.0, -1.0, 0.5, -0.5};
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= 5;
  for (std::size_t code = 0; code < total; ++code) {
    CoefVector x;
    std::size_t c = code;
    for (std::size_t i = 0; i < d; ++i) {
      if (vals[c % 5] != 0.0) x.set(i + 1, vals[c % 5]);
      c /= 5;
    }
    if (x.sup_norm() == 1.0) out.push_back(x);
  }
  return out;
}

std::vector<IndexSet> all_subsets(const IndexSet& s) {
  const std::vector<Index> v(s.begin(), s.end());
  std::vector<IndexSet> out;
  for (std::uint32_t m = 0; m < (1U << v.size()); ++m) {
    IndexSet a;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (m >> i & 1U) a.insert(v[i]);
    }
    out.push_back(a);
  }
  return out;
}

bool greedy(const CoefVector& x, const IndexSet& a) {
  double lo = kInf;
  double hi = 0.0;
  for (const auto& [n, v] : x) {
    if (a.contains(n)) {
      lo = std::min(lo, std::fabs(v));
    } else {
      hi = std::max(hi, std::fabs(v));
    }
  }
  return a.empty() || lo >= hi;
}

CoefVector restrict(const CoefVector& x, const IndexSet& a) {
  CoefVector out;
  for (Index n : a) out.set(n, x[n]);
  return out;
}

CoefVector remove(const CoefVector& x, const IndexSet& a) {
  CoefVector out;
  for (const auto& [n, v] : x) {
    if (!a.contains(n)) out.set(n, v);
  }
  return out;
}

struct Brute {
  std::map<std::string, double> v;
  void offer(const std::string& k, double r) {
    auto [it, fresh] = v.emplace(k, r);
    if (!fresh) it->second = std::max(it->second, r);
  }
};

// Weighted sum sum_j c(j) x_{o_j} e_{o_j} over the first `len` positions of o (zero-padded).
CoefVector weighted(const CoefVector& x, const std::vector<Index>& o, std::size_t len,
                    const std::function<double(std::size_t)>& c) {
  CoefVector out;
  for (std::size_t j = 1; j <= std::min(len, o.size()); ++j) out.set(o[j - 1], c(j) * x[o[j - 1]]);
  return out;
}

Brute brute_scalar(const SpaceSpec& space, const std::vector<CoefVector>& fam) {
  Brute b;
  b.offer("almost_greedy", 1.0);
  b.offer("suppression_qg", 1.0);
  for (const auto& x : fam) {
    const double nx = space.norm(x);
    const auto subsets = all_subsets(x.support());
    for (const auto& a : subsets) {
      if (!greedy(x, a)) continue;
      b.offer("qg", space.norm(restrict(x, a)) / nx);
      b.offer("suppression_qg", space.norm(remove(x, a)) / nx);
      if (!a.empty()) {
        double lo = kInf;
        CoefVector ind;
        for (Index n : a) {
          lo = std::min(lo, std::fabs(x[n]));
          ind.set(n, x[n] > 0 ? 1.0 : -1.0);
        }
        b.offer("tqg", lo * space.norm(ind) / nx);
      }
      for (const auto& bb : subsets) {
        if (bb.size() <= a.size()) b.offer("almost_greedy", space.norm(remove(x, a)) / space.norm(remove(x, bb)));
      }
      bool top = !a.empty();
      for (Index n : a) top = top && std::fabs(x[n]) == 1.0;
      if (top) b.offer("qglc", space.norm(restrict(x, a)) / nx);
    }
    const std::size_t s = x.support_size();
    for (const auto& o : oracle::greedy_permutations(x)) {
      auto ces = [&](std::size_t n) {
        return weighted(x, o, n, [&](std::size_t j) { return static_cast<double>(n + 1 - j) / static_cast<double>(n); });
      };
      for (std::size_t n = 1; n <= 2 * s; ++n) b.offer("cqg", space.norm(ces(n)) / nx);
      for (std::size_t n = 1; n <= s; ++n) b.offer("vpqg", space.norm(2.0 * ces(2 * n) - ces(n)) / nx);
    }
  }
  return b;
}

std::vector<SpaceSpec> small_spaces(std::size_t d) {
  return {SpaceSpec::summing_c0(d),
          SpaceSpec::lorentz(WeightSequence::harmonic(), d),
          SpaceSpec::weighted_l1(WeightSequence::geometric(0.5), d),
          SpaceSpec::max_functionals({CoefVector{{1, 1.0}, {2, 1.0}, {3, 1.0}}, CoefVector{{2, 1.0}, {4, -1.0}}}, d),
          SpaceSpec::circ_renorm(SpaceSpec::summing_c0(d)),
          SpaceSpec::lp(1.5, d)};
}

SearchConfig family_config(std::size_t d) {
  SearchConfig cfg;
  cfg.exhaustive = ExhaustiveFamily{d, {1.0, 0.5}, 50000};
  return cfg;
}

const std::vector<ConstantKind> kScalar{ConstantKind::QuasiGreedy,   ConstantKind::SuppressionQuasiGreedy,
                                        ConstantKind::CesaroQuasiGreedy, ConstantKind::VallePoussinQuasiGreedy,
                                        ConstantKind::Qglc,          ConstantKind::TruncationQuasiGreedy,
                                        ConstantKind::AlmostGreedy};

}  // namespace

TEST_CASE("constant names round trip") {
  for (auto k : kScalar) CHECK(constant_kind_from_string(to_string(k)) == k);
  CHECK(constant_kind_from_string("psi") == ConstantKind::Psi);
  CHECK_THROWS_AS(constant_kind_from_string("qgg"), InputError);
}

TEST_CASE("scalar constants match brute force over F(5, {1, 1/2})") {
  const std::size_t d = 5;
  const auto fam = raw_family(d);
  for (const auto& space : small_spaces(d)) {
    INFO(space.label());
    const auto brute = brute_scalar(space, fam);
    const auto est = estimate_constants(space, family_config(d), kScalar);
    for (const auto& [kind, e] : est) {
      INFO(to_string(kind));
      CHECK(e.mode == EstimateMode::ExactOverFamily);
      CHECK(e.value == doctest::Approx(brute.v.at(to_string(kind))).epsilon(1e-12));
      CHECK(evaluate_witness(space, kind, e.witness) == doctest::Approx(e.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("threshold functions match brute force over F(4, {1, 1/2})") {
  const std::size_t d = 4;
  const auto fam = raw_family(d);
  const auto grid = default_t_grid();
  for (const auto& space : small_spaces(d)) {
    INFO(space.label());
    const auto th = threshold_functions(space, grid, family_config(d));
    for (double t : grid) {
      double phi = 1.0;
      double theta = 1.0;
      double phi_u = 1.0;
      for (const auto& x : fam) {
        const double nx = space.norm(x);
        IndexSet at;
        for (const auto& [n, v] : x) {
          if (std::fabs(v) >= t) at.insert(n);
        }
        // x ranges over Q, so any threshold t' >= t applies to the normalized vector
        for (const auto& [n, v] : x) {
          if (std::fabs(v) < t) continue;
          IndexSet above;
          for (const auto& [k, u] : x) {
            if (std::fabs(u) >= std::fabs(v)) above.insert(k);
          }
          theta = std::max(theta, space.norm(restrict(x, above)) / nx);
        }
        for (const auto& b : all_subsets(at)) {
          phi = std::max(phi, space.norm(restrict(x, b)) / nx);
          // b marks the multipliers equal to -1
          CoefVector y;
          for (Index n : at) y.set(n, (b.contains(n) ? -1.0 : 1.0) * x[n]);
          phi_u = std::max(phi_u, space.norm(y) / nx);
        }
      }
      INFO("t = " << t);
      CHECK(th.phi.at(t) == doctest::Approx(phi).epsilon(1e-12));
      CHECK(th.theta.at(t) == doctest::Approx(theta).epsilon(1e-12));
      CHECK(th.phi_u.at(t) == doctest::Approx(phi_u).epsilon(1e-12));
    }
    for (const auto* f : {&th.phi, &th.theta, &th.phi_u}) {
      for (const auto& p : f->grid) {
        CHECK(evaluate_witness(space, f->kind, p.estimate.witness) == doctest::Approx(p.estimate.value).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("psi grid matches brute force over F(4, {1, 1/2})") {
  const std::size_t d = 4;
  const auto fam = raw_family(d);
  const auto ts = default_psi_t_grid();
  const auto ss = default_psi_s_grid();
  for (const auto& space : small_spaces(d)) {
    INFO(space.label());
    const auto grid = psi_grid(space, ts, ss, family_config(d));
    std::vector<double> expect(ts.size() * ss.size(), 1.0);
    for (const auto& x : fam) {
      const double nx = space.norm(x);
      const auto xs = x.support();
      const std::vector<Index> supp(xs.begin(), xs.end());
      std::size_t labels = 1;
      for (std::size_t i = 0; i < supp.size(); ++i) labels *= 3;
      for (std::size_t code = 0; code < labels; ++code) {
        CoefVector hx, y, z;
        std::size_t c = code;
        for (Index n : supp) {
          (c % 3 == 0 ? hx : c % 3 == 1 ? y : z).set(n, x[n]);
          c /= 3;
        }
        if (y.empty() || !dominates(hx, y) || !dominates(y, z)) continue;
        const double o = osc(y, y.support());
        const auto ysup = y.support();
        const std::vector<Index> ys(ysup.begin(), ysup.end());
        double best = 0.0;
        for (std::uint32_t m = 0; m < (1U << ys.size()); ++m) {
          CoefVector u;
          for (std::size_t i = 0; i < ys.size(); ++i) u.set(ys[i], (m >> i & 1U ? -1.0 : 1.0) * y[ys[i]]);
          best = std::max(best, space.norm(u) / nx);
        }
        for (std::size_t i = 0; i < ts.size(); ++i) {
          for (std::size_t j = 0; j < ss.size(); ++j) {
            if (static_cast<double>(hx.support_size()) <= ts[i] * static_cast<double>(y.support_size()) &&
                o <= 1.0 / ss[j])
              expect[i * ss.size() + j] = std::max(expect[i * ss.size() + j], best);
          }
        }
      }
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
      for (std::size_t j = 0; j < ss.size(); ++j) {
        const auto& e = grid.at(ts[i], ss[j]);
        INFO("t = " << ts[i] << ", s = " << ss[j]);
        CHECK(e.value == doctest::Approx(expect[i * ss.size() + j]).epsilon(1e-12));
        CHECK(evaluate_witness(space, ConstantKind::Psi, e.witness) == doctest::Approx(e.value).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("sign sets: ucc and succ match brute force") {
  for (const auto& space : small_spaces(5)) {
    INFO(space.label());
    const std::size_t w = 5;
    double ucc = 1.0;
    double succ = 1.0;
    for (std::uint32_t set = 1; set < (1U << w); ++set) {
      // every sign vector on the set, as a map from mask to vector
      std::vector<CoefVector> vs;
      std::vector<std::uint32_t> masks;
      for (std::uint32_t m = 0; m < (1U << w); ++m) {
        if ((m & ~set) != 0U) continue;
        CoefVector v;
        for (std::size_t i = 0; i < w; ++i) {
          if (set >> i & 1U) v.set(i + 1, m >> i & 1U ? -1.0 : 1.0);
        }
        vs.push_back(v);
      }
      for (const auto& a : vs) {
        for (const auto& b : vs) ucc = std::max(ucc, space.norm(a) / space.norm(b));
        for (const auto& sub : all_subsets(a.support())) succ = std::max(succ, space.norm(restrict(a, sub)) / space.norm(a));
      }
    }
    const auto u = ucc_constant(space, w);
    const auto s = succ_constant(space, w);
    CHECK(u.value == doctest::Approx(ucc).epsilon(1e-12));
    CHECK(s.value == doctest::Approx(succ).epsilon(1e-12));
    CHECK(u.mode == EstimateMode::ExactOverFamily);
    CHECK(evaluate_witness(space, ConstantKind::Ucc, u.witness) == u.value);
    CHECK(evaluate_witness(space, ConstantKind::SuppressionUcc, s.witness) == s.value);
  }
  CHECK_THROWS_AS(ucc_constant(SpaceSpec::lp(2), 15), DomainError);
}

TEST_CASE("unconditional spaces give exact ones on F(6, {1, 1/2})") {
  for (const auto& space : {SpaceSpec::lp(1, 6), SpaceSpec::lp(2, 6), SpaceSpec::lp(kInf, 6),
                            SpaceSpec::lorentz(WeightSequence::harmonic(), 6)}) {
    INFO(space.label());
    const auto est = estimate_constants(space, family_config(6), kScalar);
    for (const auto& [kind, e] : est) CHECK(std::fabs(e.value - 1.0) <= 1e-9);
    CHECK(ucc_constant(space, 6).value == doctest::Approx(1.0));
    CHECK(succ_constant(space, 6).value == doctest::Approx(1.0));
  }
}

TEST_CASE("summing basis: constant and alternating signs witness ucc >= 4") {
  const auto space = SpaceSpec::summing_c0(8);
  const auto u = ucc_constant(space, 8);
  CHECK(u.value >= 4.0);
  CHECK(u.value == 8.0);
  CHECK(u.witness.set_a.size() == 8);
}

TEST_CASE("threshold function inequalities") {
  for (const auto& space : small_spaces(5)) {
    const auto th = threshold_functions(space, default_t_grid(), family_config(5));
    for (double t : default_t_grid()) {
      CHECK(th.theta.at(t) <= th.phi.at(t) * (1 + 1e-12));
      CHECK(th.phi.at(t) <= th.phi_u.at(t) * (1 + 1e-12));
      CHECK(th.phi_u.at(t) <= 2 * th.phi.at(t) * (1 + 1e-12));
    }
    const auto g = psi_grid(space, default_psi_t_grid(), default_psi_s_grid(), family_config(5));
    for (std::size_t i = 1; i < g.t_values.size(); ++i) {
      for (double s : g.s_values) CHECK(g.at(g.t_values[i - 1], s).value <= g.at(g.t_values[i], s).value);
    }
    for (double t : g.t_values) {
      for (std::size_t j = 1; j < g.s_values.size(); ++j)
        CHECK(g.at(t, g.s_values[j - 1]).value <= g.at(t, g.s_values[j]).value);
    }
    for (std::size_t i = 1; i < g.curve.size(); ++i) {
      CHECK(g.curve[i - 1].first < g.curve[i].first);
      CHECK(g.curve[i - 1].second <= g.curve[i].second);
    }
    CHECK(g.curve_value(1.0) >= 1.0);
  }
}

TEST_CASE("random search: deterministic, jobs independent, nested budgets") {
  const auto space = SpaceSpec::summing_c0(24);
  SearchConfig cfg;
  cfg.samples = 150;
  cfg.dimension = 24;
  const auto a = estimate_constants(space, cfg, kScalar);
  const auto b = estimate_constants(space, cfg, kScalar);
  SearchConfig par = cfg;
  par.jobs = 4;
  const auto c = estimate_constants(space, par, kScalar);
  SearchConfig more = cfg;
  more.samples = 600;
  const auto m = estimate_constants(space, more, kScalar);
  for (auto k : kScalar) {
    INFO(to_string(k));
    CHECK(a.at(k).value == b.at(k).value);
    CHECK(a.at(k).witness == b.at(k).witness);
    CHECK(a.at(k).value == c.at(k).value);
    CHECK(a.at(k).witness == c.at(k).witness);
    CHECK(a.at(k).value <= m.at(k).value);
    CHECK(a.at(k).mode == EstimateMode::RandomSearch);
    CHECK(a.at(k).value >= 1.0);
    CHECK(evaluate_witness(space, k, a.at(k).witness) == doctest::Approx(a.at(k).value).epsilon(1e-9));
  }
  cfg.samples = 0;
  CHECK_THROWS_AS(estimate_constants(space, cfg, kScalar), BudgetError);
}

TEST_CASE("witness ratios are scale invariant") {
  const auto space = SpaceSpec::summing_c0(16);
  SearchConfig cfg;
  cfg.samples = 100;
  cfg.dimension = 16;
  for (const auto& [kind, e] : estimate_constants(space, cfg, kScalar)) {
    if (kind == ConstantKind::Qglc) continue;
    Witness w = e.witness;
    w.x = -3.5 * w.x;
    CHECK(evaluate_witness(space, kind, w) == doctest::Approx(e.value).epsilon(1e-12));
  }
}

TEST_CASE("invalid witnesses are rejected") {
  const auto space = SpaceSpec::lp(2, 8);
  Witness w;
  w.x = CoefVector{{1, 1.0}, {2, 3.0}};
  w.set_a = {1};
  CHECK_THROWS_AS(evaluate_witness(space, ConstantKind::QuasiGreedy, w), DomainError);
  w.ordering = {1, 2};
  w.n = 1;
  CHECK_THROWS_AS(evaluate_witness(space, ConstantKind::CesaroQuasiGreedy, w), DomainError);
  Witness z;
  z.set_a = {1};
  z.eps = SignPattern{{1, 1}};
  z.set_b = {2};
  CHECK_THROWS_AS(evaluate_witness(space, ConstantKind::SuppressionUcc, z), DomainError);
}

TEST_CASE("democracy functions") {
  for (double p : {1.0, 2.0, 3.0}) {
    const auto pts = democracy_functions(SpaceSpec::lp(p, 16), 9, 9, SignMode::AllSigns, {16, 100000, 100, 1});
    CHECK(pts[0].sup == doctest::Approx(std::pow(9.0, 1.0 / p)).epsilon(1e-12));
    CHECK(pts[0].inf == doctest::Approx(std::pow(9.0, 1.0 / p)).epsilon(1e-12));
  }
  const auto lz = democracy_functions(SpaceSpec::lorentz(WeightSequence::harmonic(), 8), 3, 3, SignMode::ConstantSigns);
  CHECK(lz[0].sup == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
  const auto sc = democracy_functions(SpaceSpec::summing_c0(8), 4, 4, SignMode::AllSigns);
  CHECK(sc[0].sup == 4.0);
  CHECK(sc[0].inf == 1.0);
  CHECK(sc[0].exhaustive);
  // brute force over [1, 6]
  const auto space = SpaceSpec::summing_c0(6);
  const auto pts = democracy_functions(space, 1, 6, SignMode::AllSigns, {6, 1000000, 0, 1});
  for (const auto& pt : pts) {
    double hi = 0.0;
    double lo = kInf;
    for (std::uint32_t set = 1; set < 64; ++set) {
      if (static_cast<std::size_t>(std::popcount(set)) != pt.m) continue;
      for (std::uint32_t m = 0; m < 64; ++m) {
        if ((m & ~set) != 0U) continue;
        CoefVector v;
        for (std::size_t i = 0; i < 6; ++i) {
          if (set >> i & 1U) v.set(i + 1, m >> i & 1U ? -1.0 : 1.0);
        }
        hi = std::max(hi, space.norm(v));
        lo = std::min(lo, space.norm(v));
      }
    }
    CHECK(pt.sup == hi);
    CHECK(pt.inf == lo);
    CHECK(space.norm(indicator_sum(pt.sup_eps, pt.sup_set)) == pt.sup);
  }
  CHECK_THROWS_AS(democracy_functions(space, 0, 2, SignMode::AllSigns), InputError);
}
