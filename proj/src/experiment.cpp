#include "tga/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "serialize_internal.hpp"
#include "tga/constants.hpp"
#include "tga/errors.hpp"
#include "tga/format.hpp"
#include "tga/greedy.hpp"

namespace tga {

using detail::field;
using detail::get_as;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "constants", "thresholds",
                                              "psi",        "subsequences", "democracy",
                                              "classify",   "question1",    "question2"};
  return names;
}

// ---------------------------------------------------------------- config

namespace {

template <class T>
std::vector<T> list_of(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("field '") + what + "' must be a list");
  return get_as<std::vector<T>>(j, what);
}

void read_options(ExperimentConfig& c, const Json& j) {
  if (!j.is_object()) throw InputError("options must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "identity_samples") {
      c.identity_samples = get_as<std::size_t>(value, "identity_samples");
    } else if (key == "horizon") {
      c.horizon = get_as<std::size_t>(value, "horizon");
    } else if (key == "tolerances") {
      c.tolerances = list_of<double>(value, "tolerances");
    } else if (key == "eps") {
      c.eps = get_as<double>(value, "eps");
    } else if (key == "classify_dimensions") {
      c.classify_dimensions = list_of<std::size_t>(value, "classify_dimensions");
    } else if (key == "question1_dimensions") {
      c.question1_dimensions = list_of<std::size_t>(value, "question1_dimensions");
    } else {
      throw InputError("unknown option '" + key + "'");
    }
  }
  if (c.horizon < 2) throw InputError("horizon must be at least 2");
  if (!(c.eps > 0.0)) throw InputError("eps must be positive");
  if (c.classify_dimensions.empty() || c.question1_dimensions.empty()) throw InputError("dimension lists must be nonempty");
}

}  // namespace

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config must be an object");
  ExperimentConfig c;
  bool seeded = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "spaces") {
      if (!value.is_array()) throw InputError("spaces must be a list");
      for (const auto& s : value) c.spaces.push_back(space_from_json(s));
    } else if (key == "suites") {
      c.suites = list_of<std::string>(value, "suites");
    } else if (key == "budget") {
      c.budget = search_config_from_json(value, c.budget);
      seeded = value.contains("seed");
    } else if (key == "family") {
      c.family = family_from_json(value);
    } else if (key == "output") {
      if (!value.is_object()) throw InputError("output must be an object");
      for (const auto& [k, v] : value.items()) {
        if (k == "directory") {
          c.output_dir = get_as<std::string>(v, "directory");
        } else if (k == "formats") {
          const auto formats = list_of<std::string>(v, "formats");
          c.write_json = c.write_csv = false;
          for (const auto& f : formats) {
            if (f == "json") {
              c.write_json = true;
            } else if (f == "csv") {
              c.write_csv = true;
            } else {
              throw InputError("unknown output format '" + f + "'");
            }
          }
        } else {
          throw InputError("unknown output field '" + k + "'");
        }
      }
    } else if (key == "options") {
      read_options(c, value);
    } else {
      throw InputError("unknown config field '" + key + "'");
    }
  }
  if (c.spaces.empty()) throw InputError("config lists no spaces");
  if (c.suites.empty()) throw InputError("config lists no suites");
  if (!seeded) throw InputError("config budget must fix a seed");
  for (const auto& s : c.suites) {
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
      throw InputError("unknown suite '" + s + "'");
    }
  }
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  Json spaces = Json::array();
  for (const auto& s : c.spaces) spaces.push_back(to_json(s));
  j["spaces"] = spaces;
  j["suites"] = c.suites;
  j["budget"] = to_json(c.budget);
  j["family"] = to_json(c.family);
  Json formats = Json::array();
  if (c.write_json) formats.push_back("json");
  if (c.write_csv) formats.push_back("csv");
  j["output"] = Json{{"formats", formats}};
  j["options"] = Json{{"identity_samples", c.identity_samples},
                      {"horizon", c.horizon},
                      {"tolerances", c.tolerances},
                      {"eps", c.eps},
                      {"classify_dimensions", c.classify_dimensions},
                      {"question1_dimensions", c.question1_dimensions}};
  return j;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot read config " + file.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config is not valid JSON: " + std::string(e.what()));
  }
  return experiment_config_from_json(j);
}

// ---------------------------------------------------------------- suites

namespace {

int severity(CheckStatus s) {
  switch (s) {
    case CheckStatus::CounterexampleFound: return 4;
    case CheckStatus::Inconclusive: return 3;
    case CheckStatus::PreconditionFailed: return 2;
    case CheckStatus::ConsistentWithinBudget: return 1;
    case CheckStatus::ExactPass: return 0;
  }
  return 3;
}

// One report over several instances of the same check.
CheckReport merge(const std::string& name, const std::vector<CheckReport>& parts) {
  CheckReport r;
  r.check_name = name;
  r.status = CheckStatus::ExactPass;
  r.worst_slack = std::numeric_limits<double>::infinity();
  Json statuses = Json::object();
  for (const auto& p : parts) {
    r.instances += p.instances;
    if (p.status != CheckStatus::PreconditionFailed) r.worst_slack = std::min(r.worst_slack, p.worst_slack);
    if (severity(p.status) > severity(r.status)) r.status = p.status;
    if (p.counterexample && !r.counterexample) r.counterexample = p.counterexample;
    const std::string key = to_string(p.status);
    statuses[key] = statuses.value(key, 0) + 1;
  }
  if (parts.empty()) r.status = CheckStatus::Inconclusive;
  r.details["runs"] = parts.size();
  r.details["statuses"] = statuses;
  return r;
}

SearchConfig search_for(const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed, std::size_t dim) {
  SearchConfig cfg = c.budget;
  cfg.seed = seed;
  cfg.jobs = 1;
  cfg.dimension = std::min(dim, space.cap());
  cfg.max_support = std::min(cfg.max_support, cfg.dimension);
  cfg.min_support = std::min(cfg.min_support, cfg.max_support);
  if (cfg.exhaustive && cfg.exhaustive->dimension > space.cap()) cfg.exhaustive->dimension = space.cap();
  return cfg;
}

ExhaustiveFamily family_for(const SpaceSpec& space, const ExperimentConfig& c) {
  ExhaustiveFamily f = c.family;
  f.dimension = std::min(f.dimension, space.cap());
  return f;
}

Json estimates_json(const std::map<ConstantKind, ConstantEstimate>& est) {
  Json j = Json::object();
  for (const auto& [k, e] : est) j[to_string(k)] = to_json(e);
  return j;
}

Json threshold_json(const ThresholdFunctionEstimate& f) {
  Json arr = Json::array();
  for (const auto& p : f.grid) arr.push_back(Json{{"t", p.t}, {"estimate", to_json(p.estimate)}});
  return arr;
}

Json democracy_json(const std::vector<DemocracyPoint>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) {
    arr.push_back(Json{{"m", p.m},
                       {"sup", p.sup},
                       {"inf", p.inf},
                       {"ratio", p.ratio},
                       {"sup_set", to_json(p.sup_set)},
                       {"sup_eps", to_json(p.sup_eps)},
                       {"inf_set", to_json(p.inf_set)},
                       {"inf_eps", to_json(p.inf_eps)},
                       {"exhaustive", p.exhaustive}});
  }
  return arr;
}

Json curve_json(const std::vector<std::pair<double, double>>& curve) {
  Json arr = Json::array();
  for (const auto& [o, v] : curve) arr.push_back(Json::array({number_json(o), v}));
  return arr;
}

std::string residual_csv(const std::vector<ResidualRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + format_number(r.greedy) + "," + format_number(r.cesaro) + "," +
           format_number(r.vp) + "\n";
  }
  return out;
}

Json subsequence_json(const SubsequenceResult& s) {
  Json hits = Json::array();
  for (const auto& [tol, hit] : s.tolerance_hits) {
    hits.push_back(Json{{"tolerance", tol}, {"index", hit ? Json(*hit) : Json(nullptr)}});
  }
  return Json{{"d", s.d}, {"selected_indices", s.selected_indices}, {"residuals", s.residuals},
              {"ell1_fallback", s.ell1_fallback}, {"tolerance_hits", hits}};
}

void suite_identities(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed) {
  auto vp = check_vp_identity(space, c.identity_samples, seed);
  if (vp.details.contains("worst_instance")) r.samples.push_back(vp.details["worst_instance"]);
  r.checks.push_back(std::move(vp));
  Rng rng(derive_seed(seed, 1, 0));
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<CheckReport> parts;
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<Index> pos(4 * n + 4);
      std::iota(pos.begin(), pos.end(), 1);
      for (std::size_t k = pos.size() - 1; k > 0; --k) std::swap(pos[k], pos[rng.below(k + 1)]);
      SignPattern eps;
      for (std::size_t j = 0; j < 2 * n; ++j) eps.set(pos[j], rng.sign());
      CoefVector x;
      const std::size_t extra = rng.below(4);
      for (std::size_t j = 0; j < extra; ++j) x.set(pos[2 * n + j], rng.sign() * (0.05 + 0.95 * rng.uniform01()));
      parts.push_back(check_permutation_average(n, eps, x));
    }
    auto m = merge("permutation_average", parts);
    m.details["n"] = n;
    m.details["coefficient"] = permutation_average_coefficient(n);
    r.checks.push_back(std::move(m));
  }
}

void suite_constants(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed) {
  const SearchConfig cfg = search_for(space, c, seed, c.budget.dimension);
  const auto est = estimate_constants(
      space, cfg,
      {ConstantKind::QuasiGreedy, ConstantKind::SuppressionQuasiGreedy, ConstantKind::CesaroQuasiGreedy,
       ConstantKind::VallePoussinQuasiGreedy, ConstantKind::Qglc, ConstantKind::TruncationQuasiGreedy,
       ConstantKind::AlmostGreedy});
  r.results["estimates"] = estimates_json(est);
  const std::size_t window = std::min<std::size_t>(space.cap(), 10);
  r.results["succ"] = to_json(succ_constant(space, window));
  r.results["ucc"] = to_json(ucc_constant(space, window));
  const AlphaConstants a = space.alpha();
  r.results["alpha"] = Json{{"alpha1", a.alpha1}, {"alpha2", a.alpha2}, {"alpha3", a.alpha3}};
  r.checks.push_back(check_qglc_bound(space, family_for(space, c)));
}

void suite_thresholds(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed) {
  const auto f = threshold_functions(space, default_t_grid(), search_for(space, c, seed, c.budget.dimension));
  r.results["phi"] = threshold_json(f.phi);
  r.results["theta"] = threshold_json(f.theta);
  r.results["phi_u"] = threshold_json(f.phi_u);
}

void suite_psi(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed) {
  const auto g = psi_grid(space, default_psi_t_grid(), default_psi_s_grid(),
                          search_for(space, c, seed, c.budget.dimension));
  Json values = Json::array();
  for (std::size_t i = 0; i < g.t_values.size(); ++i) {
    for (std::size_t k = 0; k < g.s_values.size(); ++k) {
      values.push_back(Json{{"t", g.t_values[i]}, {"s", g.s_values[k]},
                            {"estimate", to_json(g.values[i * g.s_values.size() + k])}});
    }
  }
  r.results["grid"] = values;
  r.results["curve_t"] = g.curve_t;
  r.results["curve"] = curve_json(g.curve);
}

void suite_subsequences(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed) {
  const std::size_t h = std::min(c.horizon, space.cap());
  ExhaustiveFamily fam = family_for(space, c);
  fam.dimension = std::min<std::size_t>(fam.dimension, 5);
  const LemmaConstants lc = lemma_constants(space, fam);
  r.results["lemma_constants"] = Json{{"vpqg", lc.vpqg}, {"psi_curve", curve_json(lc.psi_curve)},
                                      {"exact", lc.exact}, {"source", lc.source}};
  const GapSequence gaps = GapSequence::powers(2, h);

  CoefVector harmonic;
  for (Index j = 1; j <= h; ++j) harmonic.set(j, 1.0 / static_cast<double>(j));
  const auto sub = find_convergent_subsequence(space, lowest_index_ordering(harmonic, h), gaps, c.tolerances, c.eps, lc);
  r.results["harmonic"] = subsequence_json(sub);
  r.csv = residual_csv(sub.curve);
  r.checks.push_back(sub.report);

  const std::size_t hd = std::min<std::size_t>(h, 1000);
  CoefVector dyadic;
  for (Index j = 1; j <= hd; ++j) dyadic.set(j, std::ldexp(1.0, -static_cast<int>(j)));
  const auto dyadic_o = lowest_index_ordering(dyadic, hd);
  const GapSequence dyadic_gaps = GapSequence::powers(2, hd);
  const auto sub2 = find_convergent_subsequence(space, dyadic_o, dyadic_gaps, c.tolerances, c.eps, lc);
  r.results["dyadic"] = subsequence_json(sub2);
  r.checks.push_back(sub2.report);
  r.checks.push_back(check_ell1_decay(dyadic_o, dyadic_gaps, 2.0, c.eps, DecayVariant::ConsecutiveWindows));
  r.checks.push_back(check_ell1_decay(dyadic_o, dyadic_gaps, 2.0, c.eps, DecayVariant::DoubledWindows));

  // Gap windows on full-support samples.
  SearchConfig full = search_for(space, c, derive_seed(seed, 2, 0), std::min<std::size_t>(h, 32));
  full.min_support = full.max_support = full.dimension;
  const GapSequence window_gaps = GapSequence::powers(2, full.dimension / 2);
  std::vector<CheckReport> gap_parts;
  for (std::size_t i = 0; i < 8; ++i) {
    const CoefVector x = sample_vector(full, full.dimension, i);
    gap_parts.push_back(check_gap_window(space, lowest_index_ordering(x, full.dimension), window_gaps, lc));
  }
  r.checks.push_back(merge("gap_window", gap_parts));

  // Log windows on small samples.
  SearchConfig small = search_for(space, c, derive_seed(seed, 3, 0), 8);
  std::vector<CheckReport> log_parts;
  Rng rng(derive_seed(seed, 4, 0));
  for (std::size_t i = 0; i < 16; ++i) {
    const CoefVector x = sample_vector(small, small.dimension, i);
    const std::size_t n = 1 + rng.below(4);
    std::size_t lg = 0;
    while ((std::size_t{2} << lg) <= n) ++lg;
    const std::size_t len = (std::size_t{1} << (lg + 3)) * n;
    log_parts.push_back(check_log_window(space, lowest_index_ordering(x, len), n, lc));
  }
  r.checks.push_back(merge("log_window", log_parts));
}

double superdemocracy(const std::vector<DemocracyPoint>& pts) {
  double best = 1.0;
  for (std::size_t b = 0; b < pts.size(); ++b) {
    for (std::size_t a = 0; a <= b; ++a) best = std::max(best, pts[a].sup / pts[b].inf);
  }
  return best;
}

void suite_democracy(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed) {
  DemocracyConfig dc;
  dc.window = std::min<std::size_t>(space.cap(), 12);
  dc.seed = seed;
  const auto plain = democracy_functions(space, 1, dc.window, SignMode::ConstantSigns, dc);
  const auto signed_pts = democracy_functions(space, 1, dc.window, SignMode::AllSigns, dc);
  r.results["constant_signs"] = democracy_json(plain);
  r.results["all_signs"] = democracy_json(signed_pts);
  r.results["democracy"] = superdemocracy(plain);
  r.results["superdemocracy"] = superdemocracy(signed_pts);
  r.checks.push_back(check_dem_implies_qg(space, family_for(space, c)));
  if (space.cap() >= 6) {
    const std::size_t m2 = std::min<std::size_t>(4, space.cap() - 2);
    r.checks.push_back(check_spreading_condition(space, plain[m2 - 1].sup, 2, m2, 256, seed));
  }
}

void suite_classify(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c) {
  ClassifyConfig cc;
  cc.dimensions = c.classify_dimensions;
  cc.levels = c.family.levels;
  const auto rep = classify_basis(space, cc);
  r.results = to_json(rep);
}

bool grows(const std::vector<double>& v, double ratio) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1] * (1.0 + 1e-9))) return false;
  }
  return v.size() >= 2 && v.back() / v.front() >= ratio;
}

void suite_question1(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed) {
  std::vector<double> qg, cqg, vpqg;
  Json rows = Json::array();
  std::vector<std::size_t> dims;
  for (std::size_t d : c.question1_dimensions) {
    const std::size_t dd = std::min(d, space.cap());
    if (std::find(dims.begin(), dims.end(), dd) == dims.end()) dims.push_back(dd);
  }
  for (std::size_t d : dims) {
    const SpaceSpec trunc = space.truncated(d);
    SearchConfig cfg = search_for(trunc, c, seed, d);
    cfg.exhaustive.reset();
    const auto est = estimate_constants(
        trunc, cfg,
        {ConstantKind::QuasiGreedy, ConstantKind::CesaroQuasiGreedy, ConstantKind::VallePoussinQuasiGreedy});
    qg.push_back(est.at(ConstantKind::QuasiGreedy).value);
    cqg.push_back(est.at(ConstantKind::CesaroQuasiGreedy).value);
    vpqg.push_back(est.at(ConstantKind::VallePoussinQuasiGreedy).value);
    rows.push_back(Json{{"dimension", d}, {"estimates", estimates_json(est)}});
  }
  constexpr double kGrowth = 1.5;
  const bool candidate = grows(qg, kGrowth) && !grows(cqg, kGrowth) && !grows(vpqg, kGrowth);
  r.results["dimensions"] = rows;
  r.results["qg"] = qg;
  r.results["cqg"] = cqg;
  r.results["vpqg"] = vpqg;
  r.results["candidate"] = candidate;
  r.results["summary"] = candidate ? "candidate: qg grows while cqg and vpqg stay bounded (heuristic, not a proof)"
                                   : "no candidate: qg does not separate from cqg/vpqg on these dimensions";
}

void suite_question2(SuiteReport& r, const SpaceSpec& space, const ExperimentConfig& c, std::uint64_t seed) {
  const SearchConfig cfg = search_for(space, c, seed, c.budget.dimension);
  constexpr double kOne = 1.0 + 1e-9;
  std::size_t admissible = 0;
  std::size_t truncated = 0;
  double best_qg = 0.0;
  Json best = nullptr;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const CoefVector x = sample_vector(cfg, cfg.dimension, i);
    const double nx = space.norm(x);
    std::vector<GreedyOrdering> orderings;
    try {
      orderings = greedy_orderings(x, x.support_size(), TiePolicy::Enumerate, cfg.ordering_cap);
    } catch (const BudgetError&) {
      ++truncated;
      continue;
    }
    double cq = 0.0;
    double q = 0.0;
    std::size_t qn = 0;
    const GreedyOrdering* qo = nullptr;
    for (const auto& o : orderings) {
      for (std::size_t n = 1; n <= o.size(); ++n) {
        cq = std::max(cq, space.norm(cesaro_sum(o, n)) / nx);
        const double g = space.norm(greedy_sum(o, n)) / nx;
        if (g > q) {
          q = g;
          qn = n;
          qo = &o;
        }
      }
    }
    if (cq > kOne) continue;
    ++admissible;
    if (q > best_qg) {
      best_qg = q;
      best = Json{{"x", to_json(x)}, {"ordering", qo->indices()}, {"n", qn}, {"qg_ratio", q}, {"cqg_ratio", cq}};
    }
  }
  const bool found = best_qg > kOne;
  r.results["samples"] = cfg.samples;
  r.results["admissible"] = admissible;
  r.results["truncated"] = truncated;
  r.results["max_qg_ratio"] = best_qg;
  r.results["best"] = best;
  r.results["summary"] = found ? "instance with cqg ratio <= 1 and qg ratio > 1 found"
                               : "no 1-CQG counterexample found";
}

}  // namespace

SuiteReport run_suite(const SpaceSpec& space, const std::string& suite, const ExperimentConfig& config,
                      std::uint64_t seed) {
  SuiteReport r;
  r.space = space.label();
  r.slug = slug(space.label());
  r.suite = suite;
  if (suite == "identities") {
    suite_identities(r, space, config, seed);
  } else if (suite == "constants") {
    suite_constants(r, space, config, seed);
  } else if (suite == "thresholds") {
    suite_thresholds(r, space, config, seed);
  } else if (suite == "psi") {
    suite_psi(r, space, config, seed);
  } else if (suite == "subsequences") {
    suite_subsequences(r, space, config, seed);
  } else if (suite == "democracy") {
    suite_democracy(r, space, config, seed);
  } else if (suite == "classify") {
    suite_classify(r, space, config);
  } else if (suite == "question1") {
    suite_question1(r, space, config, seed);
  } else if (suite == "question2") {
    suite_question2(r, space, config, seed);
  } else {
    throw InputError("unknown suite '" + suite + "'");
  }
  return r;
}

Json to_json(const SuiteReport& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["space"] = r.space;
  j["suite"] = r.suite;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  j["results"] = r.results;
  return j;
}

// ---------------------------------------------------------------- runner

namespace {

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + file.string());
  out << text;
}

struct Task {
  std::size_t space = 0;
  std::size_t suite = 0;
};

struct TaskResult {
  SuiteReport report;
  std::string error;
};

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out, unsigned jobs) {
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.spaces.size(); ++s) {
    for (std::size_t k = 0; k < config.suites.size(); ++k) tasks.push_back({s, k});
  }
  auto chunks = run_chunks(tasks.size(), jobs, [&](std::size_t b, std::size_t e) {
    std::vector<TaskResult> res;
    for (std::size_t i = b; i < e; ++i) {
      const Task& t = tasks[i];
      const SpaceSpec& space = config.spaces[t.space];
      const std::string& suite = config.suites[t.suite];
      TaskResult tr;
      try {
        tr.report = run_suite(space, suite, config, derive_seed(config.budget.seed, t.space, t.suite));
      } catch (const std::exception& ex) {
        tr.report.space = space.label();
        tr.report.slug = slug(space.label());
        tr.report.suite = suite;
        tr.error = ex.what();
      }
      res.push_back(std::move(tr));
    }
    return res;
  });

  RunOutcome outcome;
  std::map<std::string, std::size_t> totals;
  std::size_t total_checks = 0;
  std::size_t errors = 0;
  Json runs = Json::array();
  Json samples = Json::array();
  std::map<std::string, std::size_t> slug_use;
  std::map<std::pair<std::size_t, std::size_t>, std::string> dirs;
  for (std::size_t s = 0; s < config.spaces.size(); ++s) {
    std::string sl = slug(config.spaces[s].label());
    const std::size_t used = slug_use[sl]++;
    if (used > 0) sl += "-" + std::to_string(used + 1);
    for (std::size_t k = 0; k < config.suites.size(); ++k) dirs[{s, k}] = sl;
  }

  std::size_t index = 0;
  for (const auto& chunk : chunks) {
    for (const auto& tr : chunk) {
      const Task& t = tasks[index++];
      const SuiteReport& r = tr.report;
      const std::string dir = dirs[{t.space, t.suite}];
      Json run;
      run["space"] = r.space;
      run["suite"] = r.suite;
      run["directory"] = dir;
      if (!tr.error.empty()) {
        ++errors;
        run["error"] = tr.error;
        runs.push_back(run);
        continue;
      }
      Json statuses = Json::object();
      for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const CheckReport& c = r.checks[i];
        const std::string key = to_string(c.status);
        statuses[key] = statuses.value(key, 0) + 1;
        ++totals[key];
        ++total_checks;
        if (c.failed() && c.counterexample) {
          Json payload = *c.counterexample;
          payload["recorded"] = Json{{"status", to_string(c.status)}, {"worst_slack", number_json(c.worst_slack)}};
          const std::string name =
              "payloads/" + dir + "-" + r.suite + "-" + std::to_string(i) + "-" + c.check_name + ".json";
          write_text(out / name, dump(payload));
          outcome.failures.push_back(name);
        }
      }
      for (std::size_t i = 0; i < r.samples.size(); ++i) {
        Json payload = r.samples[i];
        const CheckReport single = replay(payload);
        payload["recorded"] =
            Json{{"status", to_string(single.status)}, {"worst_slack", number_json(single.worst_slack)}};
        const std::string name = "payloads/" + dir + "-" + r.suite + "-sample-" + std::to_string(i) + ".json";
        write_text(out / name, dump(payload));
        samples.push_back(name);
      }
      run["checks"] = r.checks.size();
      run["statuses"] = statuses;
      if (config.write_json) {
        const std::string name = dir + "/" + r.suite + ".json";
        write_text(out / name, dump(to_json(r)));
        run["report"] = name;
      }
      if (config.write_csv && !r.csv.empty()) {
        const std::string name = dir + "/" + r.suite + "_residuals.csv";
        write_text(out / name, std::string(kResidualCsvHeader) + "\n" + r.csv);
        run["csv"] = name;
      }
      if (r.results.contains("summary")) run["summary"] = r.results["summary"];
      runs.push_back(run);
    }
  }

  outcome.exit_code = (outcome.failures.empty() && errors == 0) ? 0 : 1;
  Json summary;
  summary["schema_version"] = kReportSchemaVersion;
  summary["seed"] = config.budget.seed;
  summary["config"] = to_json(config);
  summary["runs"] = runs;
  Json tot = Json::object();
  for (const auto& [k, v] : totals) tot[k] = v;
  summary["totals"] = Json{{"checks", total_checks}, {"statuses", tot}, {"errors", errors}};
  summary["failures"] = outcome.failures;
  summary["samples"] = samples;
  summary["exit_code"] = outcome.exit_code;
  write_text(out / "summary.json", dump(summary));
  outcome.summary = summary;
  return outcome;
}

// ---------------------------------------------------------------- replay

namespace {

GreedyOrdering ordering_from(const Json& p) {
  return GreedyOrdering(coef_vector_from_json(field(p, "x")), get_as<std::vector<Index>>(field(p, "ordering"), "ordering"));
}

GapSequence gaps_from(const Json& j) {
  GapSequence g;
  g.terms = get_as<std::vector<std::size_t>>(field(j, "terms"), "terms");
  if (j.contains("bounded_gap") && !j.at("bounded_gap").is_null()) {
    g.bounded_gap = get_as<std::size_t>(j.at("bounded_gap"), "bounded_gap");
  }
  return g;
}

LemmaConstants constants_from(const Json& j) {
  LemmaConstants c;
  c.vpqg = get_as<double>(field(j, "vpqg"), "vpqg");
  for (const auto& row : field(j, "psi_curve")) {
    if (!row.is_array() || row.size() != 2) throw InputError("psi curve rows are [osc, value] pairs");
    c.psi_curve.emplace_back(number_from_json(row[0]), get_as<double>(row[1], "psi_curve"));
  }
  c.exact = j.value("exact", false);
  c.source = j.value("source", std::string());
  return c;
}

CheckReport replay_vp_identity(const Json& p) {
  const GreedyOrdering o = ordering_from(p);
  const std::size_t n = get_as<std::size_t>(field(p, "n"), "n");
  CheckReport r = check_vp_identity(o, n);
  const CoefVector lhs = 2.0 * cesaro_sum(o, 2 * n) - cesaro_sum(o, n);
  CoefVector rhs = greedy_sum(o, n);
  for (std::size_t j = 1; j <= n; ++j) rhs.add(o.k(n + j), cesaro_weight(n, j) * o.x()[o.k(n + j)]);
  r.details.erase("worst_instance");
  r.details["lhs"] = to_json(lhs);
  r.details["rhs"] = to_json(rhs);
  return r;
}

CheckReport replay_dispatch(const Json& p) {
  const std::string check = get_as<std::string>(field(p, "check"), "check");
  if (check == "vp_identity") return replay_vp_identity(p);
  if (check == "permutation_average") {
    return check_permutation_average(get_as<std::size_t>(field(p, "n"), "n"), sign_pattern_from_json(field(p, "eps")),
                                     coef_vector_from_json(field(p, "x")));
  }
  if (check == "qglc_bound") {
    return check_qglc_bound(space_from_json(field(p, "space")), family_from_json(field(p, "family")));
  }
  if (check == "dem_implies_qg") {
    DemocracyCheckConfig dc;
    dc.osc_threshold = get_as<double>(field(p, "osc_threshold"), "osc_threshold");
    return check_dem_implies_qg(space_from_json(field(p, "space")), family_from_json(field(p, "family")), dc);
  }
  if (check == "gap_window") {
    return check_gap_window(space_from_json(field(p, "space")), ordering_from(p), gaps_from(field(p, "gaps")),
                            constants_from(field(p, "constants")));
  }
  if (check == "log_window") {
    return check_log_window(space_from_json(field(p, "space")), ordering_from(p),
                            get_as<std::size_t>(field(p, "n"), "n"), constants_from(field(p, "constants")));
  }
  if (check == "convergent_subsequence") {
    std::optional<LemmaConstants> lc;
    if (p.contains("constants")) lc = constants_from(p.at("constants"));
    return find_convergent_subsequence(space_from_json(field(p, "space")), ordering_from(p),
                                       gaps_from(field(p, "gaps")), {}, get_as<double>(field(p, "eps"), "eps"), lc)
        .report;
  }
  if (check == "ell1_decay") {
    const std::string v = get_as<std::string>(field(p, "variant"), "variant");
    if (v != "consecutive" && v != "doubled") throw InputError("unknown decay variant '" + v + "'");
    return check_ell1_decay(ordering_from(p), gaps_from(field(p, "gaps")), get_as<double>(field(p, "l"), "l"),
                            get_as<double>(field(p, "eps"), "eps"),
                            v == "consecutive" ? DecayVariant::ConsecutiveWindows : DecayVariant::DoubledWindows);
  }
  throw InputError("unknown check '" + check + "' in payload");
}

}  // namespace

CheckReport replay(const Json& payload) {
  if (!payload.is_object()) throw InputError("payload must be an object");
  CheckReport r;
  try {
    r = replay_dispatch(payload);
  } catch (const DomainError& e) {
    throw InputError(std::string("payload does not describe a valid instance: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed payload: ") + e.what());
  }
  if (payload.contains("recorded")) {
    const Json& rec = payload.at("recorded");
    const std::string status = get_as<std::string>(field(rec, "status"), "status");
    const double slack = number_from_json(field(rec, "worst_slack"));
    const bool same = status == to_string(r.status) && slack == r.worst_slack;
    r.details["recorded"] = rec;
    r.details["recorded_mismatch"] = !same;
    if (!same) r.note = "recomputed values differ from the recorded ones";
  }
  return r;
}

bool replay_failed(const CheckReport& r) {
  return r.failed() || r.details.value("recorded_mismatch", false);
}

std::vector<SpaceSpec> example_spaces() {
  return {SpaceSpec::lp(1),
          SpaceSpec::lp(2),
          SpaceSpec::lp(INFINITY),
          SpaceSpec::summing_c0(),
          SpaceSpec::lorentz(WeightSequence::harmonic()),
          SpaceSpec::weighted_l1(WeightSequence::geometric(0.5)),
          SpaceSpec::max_functionals({CoefVector{{1, 1.0}, {2, 1.0}}, CoefVector{{2, 1.0}, {3, -1.0}}}, 16),
          SpaceSpec::circ_renorm(SpaceSpec::summing_c0())};
}

}  // namespace tga
