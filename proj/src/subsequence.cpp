#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tga/errors.hpp"
#include "tga/verify.hpp"
#include "verify_internal.hpp"

namespace tga {

void GapSequence::validate() const {
  if (terms.empty()) throw InputError("gap sequence is empty");
  if (terms.front() == 0) throw InputError("gap sequence terms must be positive");
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i] <= terms[i - 1]) throw InputError("gap sequence must increase strictly");
    if (bounded_gap && terms[i] > *bounded_gap * terms[i - 1]) {
      throw InputError("gap sequence exceeds its bounded-gap witness at term " + std::to_string(i));
    }
  }
  if (bounded_gap && *bounded_gap < 2) throw InputError("bounded-gap witness must be at least 2");
}

GapSequence GapSequence::powers(std::size_t base, std::size_t limit) {
  if (base < 2) throw InputError("gap sequence base must be at least 2");
  GapSequence g;
  g.bounded_gap = base;
  for (std::size_t n = 1; n <= limit; n *= base) g.terms.push_back(n);
  return g;
}

namespace {

constexpr std::size_t kExactSignBits = 14;
constexpr std::size_t kSampledSigns = 4096;

double inf() { return std::numeric_limits<double>::infinity(); }

// |x_{k_j}|, zero past the ordering.
double magnitude(const GreedyOrdering& o, std::size_t j) {
  return j >= 1 && j <= o.size() ? std::abs(o.x()[o.k(j)]) : 0.0;
}

// Oscillation of {k_{a+1}, ..., k_b}: 1 for an all-zero window, unbounded for a partly zero one.
double window_osc(const GreedyOrdering& o, std::size_t a, std::size_t b) {
  double hi = 0.0;
  double lo = inf();
  std::size_t zeros = 0;
  for (std::size_t j = a + 1; j <= b; ++j) {
    const double m = magnitude(o, j);
    if (m == 0.0) {
      ++zeros;
      continue;
    }
    hi = std::max(hi, m);
    lo = std::min(lo, m);
  }
  if (zeros == b - a) return 1.0;
  if (zeros > 0) return inf();
  return hi / lo;
}

// max over signs b of ||sum_{j in window} b_j x_{k_j} e_{k_j}||.
double sign_sup(const SpaceSpec& space, const GreedyOrdering& o, std::size_t a, std::size_t b, bool& exact,
                std::uint64_t seed) {
  std::vector<std::pair<Index, double>> terms;
  for (std::size_t j = a + 1; j <= b && j <= o.size(); ++j) {
    const double v = o.x()[o.k(j)];
    if (v != 0.0) terms.emplace_back(o.k(j), std::abs(v));
  }
  if (terms.empty()) return 0.0;
  auto eval = [&](auto&& sign_of) {
    CoefVector y;
    for (std::size_t i = 0; i < terms.size(); ++i) y.set(terms[i].first, sign_of(i) * terms[i].second);
    return space.norm(y);
  };
  if (space.sign_invariant()) return eval([](std::size_t) { return 1.0; });
  const std::size_t s = terms.size();
  double best = 0.0;
  if (s <= kExactSignBits) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (s - 1)); ++mask) {
      best = std::max(best, eval([&](std::size_t i) { return i > 0 && ((mask >> (i - 1)) & 1U) ? -1.0 : 1.0; }));
    }
    return best;
  }
  exact = false;
  Rng rng(seed);
  best = eval([](std::size_t) { return 1.0; });
  for (std::size_t t = 0; t < kSampledSigns; ++t) {
    std::vector<double> signs(s);
    for (auto& sg : signs) sg = rng.sign();
    best = std::max(best, eval([&](std::size_t i) { return signs[i]; }));
  }
  return best;
}

// ||VP_m|| with the ordering padded by zeros.
double vp_norm(const SpaceSpec& space, const GreedyOrdering& o, std::size_t m) {
  CoefVector y = greedy_sum(o, std::min(m, o.size()));
  for (std::size_t j = 1; j <= m && m + j <= o.size(); ++j) {
    const Index k = o.k(m + j);
    y.add(k, cesaro_weight(m, j) * o.x()[k]);
  }
  return space.norm(y);
}

double greedy_norm(const SpaceSpec& space, const GreedyOrdering& o, std::size_t m) {
  return space.norm(greedy_sum(o, std::min(m, o.size())));
}

Json constants_json(const LemmaConstants& c) {
  Json curve = Json::array();
  for (const auto& [o, v] : c.psi_curve) curve.push_back(Json::array({number_json(o), v}));
  return Json{{"vpqg", c.vpqg}, {"psi_curve", curve}, {"exact", c.exact}, {"source", c.source}};
}

Json gaps_json(const GapSequence& g) {
  Json j{{"terms", g.terms}};
  j["bounded_gap"] = g.bounded_gap ? Json(*g.bounded_gap) : Json(nullptr);
  return j;
}

void require_x_nonzero(const GreedyOrdering& o) {
  if (o.x().empty()) throw DomainError("the zero vector has no windows to check");
}

}  // namespace

CheckReport check_gap_window(const SpaceSpec& space, const GreedyOrdering& ordering, const GapSequence& gaps,
                             const LemmaConstants& constants) {
  gaps.validate();
  require_x_nonzero(ordering);
  const double nx = space.norm(ordering.x());
  double m_osc = 1.0;
  for (std::size_t n : gaps.terms) {
    if (2 * n > ordering.size()) throw DomainError("window of term " + std::to_string(n) + " exceeds the ordering");
    for (std::size_t j = n + 1; j <= 2 * n; ++j) {
      if (magnitude(ordering, j) == 0.0) throw DomainError("window of term " + std::to_string(n) + " leaves the support");
    }
    m_osc = std::max(m_osc, window_osc(ordering, n, 2 * n));
  }
  bool exact = true;
  double k_x = 0.0;
  double psi_x = 0.0;
  for (std::size_t i = 0; i < gaps.terms.size(); ++i) {
    const std::size_t n = gaps.terms[i];
    k_x = std::max(k_x, vp_norm(space, ordering, n) / nx);
    psi_x = std::max(psi_x, sign_sup(space, ordering, n, 2 * n, exact, derive_seed(1, 23, i)) / nx);
  }
  const double k = std::max(constants.vpqg, k_x);
  const double psi = std::max(constants.psi(m_osc), psi_x);
  const double bound = k + 2.0 * psi;

  CheckReport r;
  r.check_name = "gap_window";
  r.worst_slack = inf();
  for (std::size_t n : gaps.terms) {
    for (std::size_t m = n; m <= 2 * n; ++m) {
      const double g = greedy_norm(space, ordering, m) / nx;
      ++r.instances;
      r.worst_slack = std::min(r.worst_slack, detail::relative_slack(bound, g));
      if (detail::exceeds(g, bound) && !r.counterexample) {
        Json p{{"check", "gap_window"}, {"space", to_json(space)}};
        p.update(detail::ordering_json(ordering));
        p["gaps"] = gaps_json(gaps);
        p["constants"] = constants_json(constants);
        p["n"] = m;
        r.counterexample = p;
      }
    }
  }
  r.details["oscillation"] = number_json(m_osc);
  r.details["vpqg_global"] = constants.vpqg;
  r.details["vpqg_instance"] = k_x;
  r.details["psi_global"] = constants.psi(m_osc);
  r.details["psi_instance"] = psi_x;
  r.details["bound"] = bound;
  r.details["signs_exact"] = exact;
  r.details["constants_source"] = constants.source;
  if (r.counterexample) {
    r.status = exact ? CheckStatus::CounterexampleFound : CheckStatus::Inconclusive;
  } else {
    r.status = CheckStatus::ConsistentWithinBudget;
  }
  return r;
}

CheckReport check_log_window(const SpaceSpec& space, const GreedyOrdering& ordering, std::size_t n,
                             const LemmaConstants& constants) {
  if (n == 0) throw DomainError("log window needs n >= 1");
  require_x_nonzero(ordering);
  std::size_t lg = 0;
  while ((std::size_t{2} << lg) <= n) ++lg;  // floor(log2 n)
  const std::size_t imax = lg + 3;
  const std::size_t need = (std::size_t{1} << imax) * n;
  if (ordering.size() < need) {
    throw DomainError("log window needs an ordering of length " + std::to_string(need));
  }
  const double nx = space.norm(ordering.x());
  const std::size_t len = ordering.size();
  bool exact = true;
  double k_x = 0.0;
  double psi_x = 0.0;
  for (std::size_t m = 1; 2 * m <= len; ++m) {
    k_x = std::max(k_x, vp_norm(space, ordering, m) / nx);
    if (m >= ordering.x().support_size()) break;  // VP_m = x and the windows are zero from here
    if (window_osc(ordering, m, 2 * m) <= 4.0) {
      psi_x = std::max(psi_x, sign_sup(space, ordering, m, 2 * m, exact, derive_seed(1, 29, m)) / nx);
    }
  }
  const AlphaConstants a = space.alpha();
  const double k = std::max(constants.vpqg, k_x);
  const double psi = std::max(constants.psi(4.0), psi_x);
  const double bound = a.alpha1 * a.alpha2 + k + 2.0 * psi;

  CheckReport r;
  r.check_name = "log_window";
  std::optional<std::size_t> found;
  double best = inf();
  Json values = Json::array();
  for (std::size_t i = 0; i <= imax; ++i) {
    const double g = greedy_norm(space, ordering, (std::size_t{1} << i) * n) / nx;
    values.push_back(g);
    best = std::min(best, g);
    if (!found && !detail::exceeds(g, bound)) found = i;
  }
  r.instances = 1;
  r.worst_slack = detail::relative_slack(bound, best);
  r.details["n"] = n;
  r.details["i_max"] = imax;
  r.details["ratios"] = values;
  r.details["bound"] = bound;
  r.details["vpqg_instance"] = k_x;
  r.details["psi_instance"] = psi_x;
  r.details["qualifying_i"] = found ? Json(*found) : Json(nullptr);
  r.details["signs_exact"] = exact;
  if (found) {
    r.status = CheckStatus::ConsistentWithinBudget;
  } else {
    Json p{{"check", "log_window"}, {"space", to_json(space)}};
    p.update(detail::ordering_json(ordering));
    p["n"] = n;
    p["constants"] = constants_json(constants);
    r.counterexample = p;
    r.status = exact ? CheckStatus::CounterexampleFound : CheckStatus::Inconclusive;
  }
  return r;
}

CheckReport check_ell1_decay(const GreedyOrdering& ordering, const GapSequence& gaps, double l, double eps,
                             DecayVariant variant) {
  gaps.validate();
  if (!gaps.bounded_gap) throw InputError("l1 decay needs a bounded-gap witness");
  if (!(eps > 0.0) || !(l >= static_cast<double>(*gaps.bounded_gap))) {
    throw InputError("l1 decay needs eps > 0 and l at least the gap witness");
  }
  const std::size_t len = ordering.size();
  const auto& n = gaps.terms;

  // Terms whose consecutive windows satisfy the hypothesis, renumbered from 1.
  std::vector<std::size_t> m;
  double ll = l;
  CheckReport r;
  r.check_name = "ell1_decay";
  if (variant == DecayVariant::ConsecutiveWindows) {
    std::size_t last = 0;
    while (last + 1 < n.size() && n[last + 1] <= len) ++last;
    std::size_t i0 = last;  // windows i in [i0, last) all qualify
    while (i0 > 0 && window_osc(ordering, n[i0 - 1], n[i0]) >= l + eps) --i0;
    m.assign(n.begin() + static_cast<std::ptrdiff_t>(i0), n.begin() + static_cast<std::ptrdiff_t>(last + 1));
    r.details["i0"] = i0;
  } else {
    ll = 2.0 * l;
    std::size_t last = 0;
    while (last + 1 < n.size() && 2 * n[last + 1] <= len) ++last;
    std::size_t i0 = last + 1;
    while (i0 > 0 && 2 * n[i0 - 1] <= len && window_osc(ordering, n[i0 - 1], 2 * n[i0 - 1]) >= 2.0 * l + eps) --i0;
    // d_1 = n_{i0}; d_{j+1} = smallest n_f >= 2 d_j.
    std::size_t i = i0;
    while (i < n.size() && n[i] <= len) {
      m.push_back(n[i]);
      if (i > last) break;
      std::size_t f = i + 1;
      while (f < n.size() && n[f] < 2 * n[i]) ++f;
      i = f;
    }
    r.details["i0"] = i0;
    r.details["doubled_terms"] = m;
  }
  if (m.size() < 3) {
    r.status = CheckStatus::PreconditionFailed;
    r.note = "fewer than two windows satisfy the oscillation hypothesis";
    return r;
  }

  const double rho = ll / (ll + eps);
  const double t1 = magnitude(ordering, m[0] + 1) * static_cast<double>(m[1]);
  Json masses = Json::array();
  Json bounds = Json::array();
  std::vector<std::pair<double, double>> fit;
  r.worst_slack = inf();
  for (std::size_t i = 1; i + 1 < m.size(); ++i) {
    double mass = 0.0;
    for (std::size_t j = m[i] + 1; j <= m[i + 1]; ++j) mass += magnitude(ordering, j);
    const double bound = std::pow(rho, static_cast<double>(i)) * t1;
    masses.push_back(mass);
    bounds.push_back(bound);
    ++r.instances;
    r.worst_slack = std::min(r.worst_slack, detail::relative_slack(bound, mass));
    if (mass > 0.0) fit.emplace_back(static_cast<double>(i), std::log(mass));
    if (detail::exceeds(mass, bound) && !r.counterexample) {
      Json p{{"check", "ell1_decay"}};
      p.update(detail::ordering_json(ordering));
      p["gaps"] = gaps_json(gaps);
      p["l"] = l;
      p["eps"] = eps;
      p["variant"] = variant == DecayVariant::ConsecutiveWindows ? "consecutive" : "doubled";
      r.counterexample = p;
    }
  }
  std::optional<double> ratio;
  if (fit.size() >= 2) {
    double sx = 0.0, sy = 0.0;
    for (const auto& [a, b] : fit) {
      sx += a;
      sy += b;
    }
    const double k = static_cast<double>(fit.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [a, b] : fit) {
      sxx += (a - sx / k) * (a - sx / k);
      sxy += (a - sx / k) * (b - sy / k);
    }
    ratio = std::exp(sxy / sxx);
  }
  r.details["rho"] = rho;
  r.details["t1"] = t1;
  r.details["masses"] = masses;
  r.details["bounds"] = bounds;
  r.details["fitted_windows"] = fit.size();
  r.details["fitted_ratio"] = ratio ? Json(*ratio) : Json(nullptr);
  r.note = "checks the finite window-mass decay; the l1 membership itself is asymptotic";
  r.status = r.counterexample ? CheckStatus::CounterexampleFound : CheckStatus::ConsistentWithinBudget;
  return r;
}

SubsequenceResult find_convergent_subsequence(const SpaceSpec& space, const GreedyOrdering& ordering,
                                              const GapSequence& gaps, const std::vector<double>& tolerances,
                                              double eps, const std::optional<LemmaConstants>& constants) {
  gaps.validate();
  if (!gaps.bounded_gap) throw InputError("subsequence selection needs a bounded-gap witness");
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  require_x_nonzero(ordering);
  const double l = static_cast<double>(*gaps.bounded_gap);
  const std::size_t len = ordering.size();
  const CoefVector& x = ordering.x();
  const double nx = space.norm(x);

  SubsequenceResult out;
  double m_osc = 1.0;
  for (std::size_t i = 0; i < gaps.terms.size(); ++i) {
    const std::size_t n = gaps.terms[i];
    if (2 * n > len) break;
    const double o = window_osc(ordering, n, 2 * n);
    if (o <= 2.0 * l + eps) {
      out.selected_indices.push_back(i);
      out.d.push_back(n);
      m_osc = std::max(m_osc, o);
    }
  }
  if (out.d.empty()) {
    out.ell1_fallback = true;
    for (std::size_t i = 0; i < gaps.terms.size() && gaps.terms[i] <= len; ++i) {
      out.selected_indices.push_back(i);
      out.d.push_back(gaps.terms[i]);
    }
  }

  // Residual curve, built incrementally.
  CoefVector rest = x;
  std::vector<double> greedy_res(len + 1, nx);
  out.curve.reserve(len);
  for (std::size_t n = 1; n <= len; ++n) {
    rest.set(ordering.k(n), 0.0);
    greedy_res[n] = space.norm(rest);
    ResidualRow row;
    row.n = n;
    row.greedy = greedy_res[n];
    row.cesaro = space.norm(x - cesaro_sum(ordering, n));
    CoefVector vp = greedy_sum(ordering, n);
    for (std::size_t j = 1; j <= n && n + j <= len; ++j) vp.add(ordering.k(n + j), cesaro_weight(n, j) * x[ordering.k(n + j)]);
    row.vp = space.norm(x - vp);
    out.curve.push_back(row);
  }
  bool monotone = true;
  for (std::size_t n : out.d) {
    out.residuals.push_back(greedy_res[n]);
    if (out.residuals.size() >= 2 && out.residuals.back() > out.residuals[out.residuals.size() - 2] * (1 + kIdentityTolerance)) {
      monotone = false;
    }
  }
  for (double tol : tolerances) {
    std::optional<std::size_t> hit;
    for (std::size_t k = out.residuals.size(); k > 0 && out.residuals[k - 1] <= tol; --k) hit = k - 1;
    out.tolerance_hits.emplace_back(tol, hit);
  }

  CheckReport& r = out.report;
  r.check_name = "convergent_subsequence";
  r.details["d"] = out.d;
  r.details["ell1_fallback"] = out.ell1_fallback;
  r.details["residuals"] = out.residuals;
  r.details["monotone"] = monotone;
  Json hits = Json::array();
  for (const auto& [tol, hit] : out.tolerance_hits) {
    hits.push_back(Json{{"tolerance", tol}, {"index", hit ? Json(*hit) : Json(nullptr)}});
  }
  r.details["tolerance_hits"] = hits;
  r.worst_slack = inf();
  if (out.ell1_fallback) {
    r.status = CheckStatus::ConsistentWithinBudget;
    r.note = "no window met the oscillation bound; the whole sequence is used";
    r.instances = out.d.size();
    return out;
  }

  // Bound ||G_{d_k}|| <= (K + 2 Psi(1, 1/(2l + eps))) ||x|| along the selection.
  bool exact = true;
  double k_x = 0.0;
  double psi_x = 0.0;
  for (std::size_t n : out.d) {
    k_x = std::max(k_x, vp_norm(space, ordering, n) / nx);
    psi_x = std::max(psi_x, sign_sup(space, ordering, n, 2 * n, exact, derive_seed(1, 31, n)) / nx);
  }
  const double k = std::max(constants ? constants->vpqg : 1.0, k_x);
  const double psi = std::max(constants ? constants->psi(2.0 * l + eps) : 1.0, psi_x);
  const double bound = k + 2.0 * psi;
  for (std::size_t n : out.d) {
    const double g = greedy_norm(space, ordering, n) / nx;
    ++r.instances;
    r.worst_slack = std::min(r.worst_slack, detail::relative_slack(bound, g));
    if (detail::exceeds(g, bound) && !r.counterexample) {
      Json p{{"check", "convergent_subsequence"}, {"space", to_json(space)}};
      p.update(detail::ordering_json(ordering));
      p["gaps"] = gaps_json(gaps);
      p["eps"] = eps;
      if (constants) p["constants"] = constants_json(*constants);
      r.counterexample = p;
    }
  }
  r.details["oscillation"] = number_json(m_osc);
  r.details["bound"] = bound;
  r.details["signs_exact"] = exact;
  if (r.counterexample) {
    r.status = exact ? CheckStatus::CounterexampleFound : CheckStatus::Inconclusive;
  } else {
    r.status = CheckStatus::ConsistentWithinBudget;
  }
  return out;
}

CheckReport check_spreading_condition(const SpaceSpec& space, double M, std::size_t m1, std::size_t m2,
                                      std::size_t candidate_sets, std::uint64_t seed) {
  if (m2 == 0) throw DomainError("spreading condition needs m2 >= 1");
  if (m2 > kExactSignBits) throw DomainError("spreading condition enumerates signs only for m2 <= 14");
  if (m1 + m2 > space.cap()) throw DomainError("no room for m2 indices above m1 within the cap");
  if (candidate_sets == 0) throw BudgetError("no candidate sets", 0);
  const std::size_t room = space.cap() - m1;

  std::vector<IndexSet> candidates;
  auto push = [&](IndexSet a) {
    if (candidates.size() < candidate_sets && std::find(candidates.begin(), candidates.end(), a) == candidates.end()) {
      candidates.push_back(std::move(a));
    }
  };
  for (std::size_t step = 1; step * (m2 - 1) + 1 <= room && candidates.size() < candidate_sets; ++step) {
    IndexSet a;
    for (std::size_t j = 0; j < m2; ++j) a.insert(m1 + 1 + step * j);
    push(std::move(a));
    if (m2 == 1) break;
  }
  for (std::size_t off = 1; off + m2 <= room && candidates.size() < candidate_sets; off += m2) {
    IndexSet a;
    for (std::size_t j = 0; j < m2; ++j) a.insert(m1 + off + j);
    push(std::move(a));
  }
  Rng rng(seed);
  for (std::size_t tries = 0; candidates.size() < candidate_sets && tries < 4 * candidate_sets; ++tries) {
    IndexSet a;
    while (a.size() < m2) a.insert(m1 + 1 + rng.below(room));
    push(std::move(a));
  }

  CheckReport r;
  r.check_name = "spreading_condition";
  r.details["M"] = M;
  r.details["m1"] = m1;
  r.details["m2"] = m2;
  double best = inf();
  for (const IndexSet& a : candidates) {
    ++r.instances;
    double worst = 0.0;
    const std::vector<Index> idx(a.begin(), a.end());
    const std::uint64_t patterns = space.sign_invariant() ? 1 : (std::uint64_t{1} << (m2 - 1));
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      CoefVector y;
      for (std::size_t j = 0; j < idx.size(); ++j) y.set(idx[j], j > 0 && ((mask >> (j - 1)) & 1U) ? -1.0 : 1.0);
      worst = std::max(worst, space.norm(y));
    }
    best = std::min(best, worst);
    if (!detail::exceeds(worst, M)) {
      r.status = CheckStatus::ConsistentWithinBudget;
      r.worst_slack = detail::relative_slack(M, worst);
      r.details["set"] = to_json(a);
      r.details["norm"] = worst;
      r.details["candidates_tried"] = r.instances;
      return r;
    }
  }
  r.status = CheckStatus::PreconditionFailed;
  r.worst_slack = detail::relative_slack(M, best);
  r.details["best_norm"] = best;
  r.details["candidates_tried"] = r.instances;
  r.note = "no candidate set met the bound";
  return r;
}

}  // namespace tga
