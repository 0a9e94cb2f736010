#include "tga/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tga/errors.hpp"
#include "verify_internal.hpp"

namespace tga {

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::ExactPass: return "ExactPass";
    case CheckStatus::ConsistentWithinBudget: return "ConsistentWithinBudget";
    case CheckStatus::CounterexampleFound: return "CounterexampleFound";
    case CheckStatus::PreconditionFailed: return "PreconditionFailed";
    case CheckStatus::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

bool CheckReport::failed() const { return status == CheckStatus::CounterexampleFound; }

Json to_json(const CheckReport& r) {
  Json j;
  j["check"] = r.check_name;
  j["status"] = to_string(r.status);
  j["instances"] = r.instances;
  j["worst_slack"] = number_json(r.worst_slack);
  j["counterexample"] = r.counterexample ? *r.counterexample : Json(nullptr);
  j["note"] = r.note;
  j["details"] = r.details;
  return j;
}

namespace detail {

double relative_slack(double bound, double value) {
  const double scale = std::max(std::abs(bound), std::numeric_limits<double>::min());
  return (bound - value) / scale;
}

bool exceeds(double value, double bound) { return value > bound * (1.0 + kIdentityTolerance) + 1e-300; }

GreedyOrdering random_ordering(const CoefVector& x, std::size_t length, Rng& rng) {
  std::vector<Index> idx;
  idx.reserve(x.support_size());
  for (const auto& [n, v] : x) idx.push_back(n);
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return std::abs(x[a]) > std::abs(x[b]); });
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i + 1;
    while (j < idx.size() && std::abs(x[idx[j]]) == std::abs(x[idx[i]])) ++j;
    for (std::size_t k = j - 1; k > i; --k) std::swap(idx[k], idx[i + rng.below(k - i + 1)]);
    i = j;
  }
  for (Index n = 1; idx.size() < length; ++n) {
    if (!x.contains(n)) idx.push_back(n);
  }
  return GreedyOrdering(x, std::move(idx));
}

Json ordering_json(const GreedyOrdering& o) {
  Json j;
  j["x"] = to_json(o.x());
  j["ordering"] = o.indices();
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------- identities

namespace {

// Largest relative coefficient discrepancy of the two identities at n.
double identity_discrepancy(const GreedyOrdering& o, std::size_t n) {
  const CoefVector& x = o.x();
  const double scale = std::max(x.sup_norm(), std::numeric_limits<double>::min());
  const CoefVector lhs = 2.0 * cesaro_sum(o, 2 * n) - cesaro_sum(o, n);
  CoefVector direct = greedy_sum(o, n);
  for (std::size_t j = 1; j <= n; ++j) {
    const Index k = o.k(n + j);
    direct.add(k, cesaro_weight(n, j) * x[k]);
  }
  const CoefVector shifted = greedy_sum(o, n) + cesaro_sum(shifted_ordering(o, n), n);
  return std::max(max_abs_difference(lhs, direct), max_abs_difference(lhs, shifted)) / scale;
}

Json identity_payload(const GreedyOrdering& o, std::size_t n) {
  Json p{{"check", "vp_identity"}};
  p.update(detail::ordering_json(o));
  p["n"] = n;
  return p;
}

void record_identity(CheckReport& r, const GreedyOrdering& o, std::size_t n, double disc) {
  if (r.instances == 0 || -disc < r.worst_slack) r.details["worst_instance"] = identity_payload(o, n);
  ++r.instances;
  r.worst_slack = std::min(r.worst_slack, -disc);
  if (disc > kIdentityTolerance && !r.counterexample) r.counterexample = identity_payload(o, n);
}

void finish_identity(CheckReport& r) {
  r.status = r.counterexample ? CheckStatus::CounterexampleFound : CheckStatus::ExactPass;
  r.details["tolerance"] = kIdentityTolerance;
  r.details["max_discrepancy"] = -r.worst_slack;
}

}  // namespace

CheckReport check_vp_identity(const SpaceSpec& space, std::size_t samples, std::uint64_t seed) {
  CheckReport r;
  r.check_name = "vp_identity";
  SearchConfig cfg;
  cfg.seed = seed;
  const std::size_t dim = std::min<std::size_t>(space.cap(), 32);
  if (dim < 2) throw DomainError("vp identity needs a space of dimension at least 2");
  cfg.max_support = std::min(cfg.max_support, dim);
  for (std::size_t i = 0; i < samples; ++i) {
    const CoefVector x = sample_vector(cfg, dim, i);
    Rng rng(derive_seed(seed, 17, i));
    const GreedyOrdering o = detail::random_ordering(x, dim, rng);
    const std::size_t n = 1 + rng.below(dim / 2);
    record_identity(r, o, n, identity_discrepancy(o, n));
  }
  r.details["space"] = space.label();
  r.details["dimension"] = dim;
  r.details["seed"] = seed;
  finish_identity(r);
  return r;
}

CheckReport check_vp_identity(const CoefVector& x, std::size_t length, std::size_t ordering_cap) {
  CheckReport r;
  r.check_name = "vp_identity";
  for (const auto& o : greedy_orderings(x, length, TiePolicy::Enumerate, ordering_cap)) {
    for (std::size_t n = 1; 2 * n <= length; ++n) record_identity(r, o, n, identity_discrepancy(o, n));
  }
  r.details["length"] = length;
  finish_identity(r);
  return r;
}

CheckReport check_vp_identity(const GreedyOrdering& ordering, std::size_t n) {
  if (n == 0 || 2 * n > ordering.size()) throw DomainError("vp identity needs 1 <= n and 2n <= ordering length");
  CheckReport r;
  r.check_name = "vp_identity";
  record_identity(r, ordering, n, identity_discrepancy(ordering, n));
  r.details["n"] = n;
  finish_identity(r);
  return r;
}

std::uint64_t permutation_average_coefficient(std::size_t n) {
  if (n == 0) throw DomainError("permutation average needs n >= 1");
  if (n > 10) throw BudgetError("permutation average coefficient overflows for n > 10", 0);
  std::uint64_t f = 1;
  for (std::uint64_t k = 2; k <= 2 * n - 1; ++k) f *= k;
  const std::uint64_t num = f * (3 * n + 1);
  return num / 2;
}

CheckReport check_permutation_average(std::size_t n, const SignPattern& eps, const CoefVector& x) {
  if (n == 0) throw DomainError("permutation average needs n >= 1");
  if (n > 3) throw BudgetError("permutation average enumerates (2n)! orderings; n <= 3", 0);
  if (eps.size() != 2 * n) throw DomainError("permutation average needs |A| = 2n");
  if (!x.in_q()) throw DomainError("permutation average needs x in Q");
  const IndexSet a = eps.domain();
  for (const auto& [k, v] : x) {
    if (a.contains(k)) throw DomainError("x must be supported off A");
  }
  const CoefVector ind = indicator_sum(eps, a);
  const CoefVector y = ind + x;
  const GreedyOrdering rest = lowest_index_ordering(x, x.support_size());

  std::vector<Index> perm(a.begin(), a.end());
  CoefVector total;
  std::size_t count = 0;
  do {
    std::vector<Index> idx = perm;
    idx.insert(idx.end(), rest.indices().begin(), rest.indices().end());
    total += vp_sum(GreedyOrdering(y, std::move(idx)), n);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));

  const std::uint64_t coef = permutation_average_coefficient(n);
  const double c = static_cast<double>(coef);
  const double disc = max_abs_difference(total, c * ind) / c;

  CheckReport r;
  r.check_name = "permutation_average";
  r.instances = count;
  r.worst_slack = -disc;
  r.details["n"] = n;
  r.details["orderings"] = count;
  r.details["coefficient"] = coef;
  r.details["max_discrepancy"] = disc;
  if (disc > kIdentityTolerance) {
    r.counterexample = Json{{"check", "permutation_average"}, {"n", n}, {"eps", to_json(eps)}, {"x", to_json(x)}};
    r.status = CheckStatus::CounterexampleFound;
  } else {
    r.status = CheckStatus::ExactPass;
  }
  return r;
}

// ---------------------------------------------------------------- inequality chains

namespace {

SpaceSpec truncated_for(const SpaceSpec& space, const ExhaustiveFamily& family) {
  validate(family);
  if (family.dimension > space.cap()) throw DomainError("family dimension exceeds the space cap");
  return space.truncated(family.dimension);
}

SearchConfig family_config(const ExhaustiveFamily& family, unsigned jobs) {
  SearchConfig cfg;
  cfg.exhaustive = family;
  cfg.jobs = jobs;
  return cfg;
}

bool exact(const ConstantEstimate& e) { return e.mode == EstimateMode::ExactOverFamily; }

}  // namespace

CheckReport check_qglc_bound(const SpaceSpec& space, const ExhaustiveFamily& family, unsigned jobs) {
  const SpaceSpec trunc = truncated_for(space, family);
  const auto est = estimate_constants(trunc, family_config(family, jobs),
                                      {ConstantKind::Qglc, ConstantKind::VallePoussinQuasiGreedy});
  const ConstantEstimate& qglc = est.at(ConstantKind::Qglc);
  const ConstantEstimate& vpqg = est.at(ConstantKind::VallePoussinQuasiGreedy);
  const std::size_t window = std::min<std::size_t>(family.dimension, 14);
  const ConstantEstimate ucc = ucc_constant(trunc, window);
  const AlphaConstants a = trunc.alpha();
  const double aa = a.alpha1 * a.alpha2;
  const double qglc_bound = 4.0 / 3.0 * vpqg.value + aa;
  const double ucc_bound = 2.0 * (aa + 4.0 / 3.0 * vpqg.value);

  CheckReport r;
  r.check_name = "qglc_bound";
  r.instances = qglc.budget.instances;
  r.worst_slack =
      std::min(detail::relative_slack(qglc_bound, qglc.value), detail::relative_slack(ucc_bound, ucc.value));
  const bool all_exact = exact(qglc) && exact(vpqg) && window == family.dimension;
  const bool violated = detail::exceeds(qglc.value, qglc_bound) || detail::exceeds(ucc.value, ucc_bound);
  r.details["space"] = trunc.label();
  r.details["family"] = family.describe();
  r.details["qglc"] = qglc.value;
  r.details["vpqg"] = vpqg.value;
  r.details["ucc"] = ucc.value;
  r.details["alpha1"] = a.alpha1;
  r.details["alpha2"] = a.alpha2;
  r.details["qglc_bound"] = qglc_bound;
  r.details["ucc_bound"] = ucc_bound;
  r.details["exact"] = all_exact;
  if (violated) {
    r.counterexample = Json{{"check", "qglc_bound"},
                            {"space", to_json(space)},
                            {"family", to_json(family)},
                            {"qglc", to_json(qglc)},
                            {"vpqg", to_json(vpqg)},
                            {"ucc", to_json(ucc)}};
    r.status = all_exact ? CheckStatus::CounterexampleFound : CheckStatus::Inconclusive;
    r.note = all_exact ? "bound violated by exact values" : "bound violated by non-exact estimates";
  } else {
    r.status = CheckStatus::ConsistentWithinBudget;
  }
  return r;
}

namespace {

// max over a <= b of sup_a / inf_b.
double superdemocracy(const std::vector<DemocracyPoint>& pts) {
  double best = 1.0;
  for (std::size_t b = 0; b < pts.size(); ++b) {
    for (std::size_t a = 0; a <= b; ++a) best = std::max(best, pts[a].sup / pts[b].inf);
  }
  return best;
}

bool all_exhaustive(const std::vector<DemocracyPoint>& pts) {
  return std::all_of(pts.begin(), pts.end(), [](const DemocracyPoint& p) { return p.exhaustive; });
}

}  // namespace

CheckReport check_dem_implies_qg(const SpaceSpec& space, const ExhaustiveFamily& family,
                                 const DemocracyCheckConfig& config) {
  if (!(config.osc_threshold >= 1.0)) throw InputError("oscillation threshold must be at least 1");
  const SpaceSpec trunc = truncated_for(space, family);
  const std::size_t d = family.dimension;
  DemocracyConfig dc;
  dc.window = d;
  CheckReport r;
  r.check_name = "dem_implies_qg";
  r.details["space"] = trunc.label();
  r.details["family"] = family.describe();

  const auto plain = democracy_functions(trunc, 1, d, SignMode::ConstantSigns, dc);
  const double dem = superdemocracy(plain);
  r.details["democracy"] = dem;
  r.details["democracy_limit"] = config.democracy_limit;
  if (dem > config.democracy_limit) {
    r.status = CheckStatus::PreconditionFailed;
    r.note = "democracy constant above the limit on this dimension";
    return r;
  }

  const auto signed_pts = democracy_functions(trunc, 1, d, SignMode::AllSigns, dc);
  const double k2 = superdemocracy(signed_pts);
  const SearchConfig cfg = family_config(family, config.jobs);
  const auto est =
      estimate_constants(trunc, cfg, {ConstantKind::QuasiGreedy, ConstantKind::VallePoussinQuasiGreedy});
  const ConstantEstimate& qg = est.at(ConstantKind::QuasiGreedy);
  const ConstantEstimate& vpqg = est.at(ConstantKind::VallePoussinQuasiGreedy);
  const double s = 1.0 / config.osc_threshold;
  const PsiGrid grid = psi_grid(trunc, {1.0}, {s}, cfg);
  const ConstantEstimate& psi = grid.at(1.0, s);
  const double bound = vpqg.value + 2.0 * psi.value + 4.0 * k2 * psi.value;

  r.instances = qg.budget.instances;
  r.worst_slack = detail::relative_slack(bound, qg.value);
  const bool all_exact = exact(qg) && exact(vpqg) && exact(psi) && all_exhaustive(signed_pts);
  r.details["qg"] = qg.value;
  r.details["vpqg"] = vpqg.value;
  r.details["superdemocracy"] = k2;
  r.details["psi"] = psi.value;
  r.details["osc_threshold"] = config.osc_threshold;
  r.details["bound"] = bound;
  r.details["exact"] = all_exact;
  if (detail::exceeds(qg.value, bound)) {
    r.counterexample = Json{{"check", "dem_implies_qg"},
                            {"space", to_json(space)},
                            {"family", to_json(family)},
                            {"osc_threshold", config.osc_threshold},
                            {"qg", to_json(qg)}};
    r.status = all_exact ? CheckStatus::CounterexampleFound : CheckStatus::Inconclusive;
  } else {
    r.status = CheckStatus::ConsistentWithinBudget;
  }
  return r;
}

// ---------------------------------------------------------------- lemma constants

double LemmaConstants::psi(double m) const {
  double best = 1.0;
  for (const auto& [o, v] : psi_curve) {
    if (o <= m) best = std::max(best, v);
  }
  return best;
}

LemmaConstants lemma_constants(const SpaceSpec& space, const ExhaustiveFamily& family, unsigned jobs) {
  const SpaceSpec trunc = truncated_for(space, family);
  const SearchConfig cfg = family_config(family, jobs);
  const ConstantEstimate vpqg = vpqg_constant(trunc, cfg);
  const PsiGrid grid = psi_grid(trunc, {1.0}, {1.0}, cfg, 1.0);
  LemmaConstants c;
  c.vpqg = vpqg.value;
  c.psi_curve = grid.curve;
  c.exact = exact(vpqg) && exact(grid.at(1.0, 1.0));
  c.source = "exhaustive over " + family.describe() + " on " + trunc.label();
  return c;
}

}  // namespace tga
