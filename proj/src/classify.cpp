#include <algorithm>
#include <map>

#include "tga/errors.hpp"
#include "tga/verify.hpp"

namespace tga {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::LikelyHolds: return "LikelyHolds";
    case Verdict::FailsWithWitness: return "FailsWithWitness";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const PropertyVerdict& ClassificationReport::at(const std::string& property) const {
  for (const auto& p : properties) {
    if (p.property == property) return p;
  }
  throw InputError("unknown property: " + property);
}

namespace {

constexpr double kRise = 1e-9;

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names{
      "unconditional", "ucc", "quasi_greedy", "suppression_qg", "cqg", "vpqg", "qglc",
      "tqg", "near_unconditional", "almost_greedy", "democratic", "superdemocratic"};
  return names;
}

// Failure of the key implies failure of each listed property.
const std::vector<std::pair<std::string, std::vector<std::string>>>& implications() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> rules{
      {"ucc", {"vpqg", "unconditional"}},
      {"qglc", {"vpqg"}},
      {"near_unconditional", {"vpqg"}},
      {"vpqg", {"cqg"}},
      {"cqg", {"quasi_greedy"}},
      {"quasi_greedy", {"almost_greedy", "unconditional", "suppression_qg"}},
      {"democratic", {"superdemocratic"}},
  };
  return rules;
}

Verdict trend(const std::vector<std::pair<std::size_t, double>>& trace, double growth_ratio) {
  if (trace.size() < 2) return Verdict::Inconclusive;
  bool increasing = true;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (!(trace[i].second > trace[i - 1].second * (1.0 + kRise))) increasing = false;
  }
  const double growth = trace.back().second / trace.front().second;
  if (increasing && growth >= growth_ratio) return Verdict::FailsWithWitness;
  if (growth > 1.0 + kRise) return Verdict::Inconclusive;
  return Verdict::LikelyHolds;
}

// Largest sup_a / inf_b over a <= b.
double democracy_ratio(const std::vector<DemocracyPoint>& pts) {
  double best = 1.0;
  for (std::size_t b = 0; b < pts.size(); ++b) {
    for (std::size_t a = 0; a <= b; ++a) best = std::max(best, pts[a].sup / pts[b].inf);
  }
  return best;
}

bool holds(Verdict v) { return v == Verdict::LikelyHolds; }
bool fails(Verdict v) { return v == Verdict::FailsWithWitness; }

Verdict both(Verdict a, Verdict b) {
  if (fails(a) || fails(b)) return Verdict::FailsWithWitness;
  if (holds(a) && holds(b)) return Verdict::LikelyHolds;
  return Verdict::Inconclusive;
}

}  // namespace

ClassificationReport classify_basis(const SpaceSpec& space, const ClassifyConfig& config) {
  std::vector<std::size_t> dims;
  for (std::size_t d : config.dimensions) {
    const std::size_t c = std::min(d, space.cap());
    if (c >= 1 && std::find(dims.begin(), dims.end(), c) == dims.end()) dims.push_back(c);
  }
  std::sort(dims.begin(), dims.end());
  if (dims.empty()) throw InputError("classification needs at least one dimension");

  std::map<std::string, PropertyVerdict> by_name;
  for (const auto& name : property_names()) by_name[name].property = name;
  auto record = [&](const std::string& name, std::size_t d, double v, std::optional<ConstantEstimate> w) {
    auto& p = by_name.at(name);
    p.trace.emplace_back(d, v);
    p.bound = std::max(p.bound, v);
    if (w) p.witness = std::move(w);
  };

  double last_cqg = 1.0, last_vpqg = 1.0, last_ag = 1.0, last_dem = 1.0;
  for (std::size_t d : dims) {
    const SpaceSpec trunc = space.truncated(d);
    SearchConfig cfg;
    cfg.exhaustive = ExhaustiveFamily{d, config.levels, 50000};
    cfg.jobs = config.jobs;
    const auto est = estimate_constants(
        trunc, cfg,
        {ConstantKind::QuasiGreedy, ConstantKind::SuppressionQuasiGreedy, ConstantKind::CesaroQuasiGreedy,
         ConstantKind::VallePoussinQuasiGreedy, ConstantKind::Qglc, ConstantKind::TruncationQuasiGreedy,
         ConstantKind::AlmostGreedy});
    record("quasi_greedy", d, est.at(ConstantKind::QuasiGreedy).value, est.at(ConstantKind::QuasiGreedy));
    record("suppression_qg", d, est.at(ConstantKind::SuppressionQuasiGreedy).value,
           est.at(ConstantKind::SuppressionQuasiGreedy));
    record("cqg", d, est.at(ConstantKind::CesaroQuasiGreedy).value, est.at(ConstantKind::CesaroQuasiGreedy));
    record("vpqg", d, est.at(ConstantKind::VallePoussinQuasiGreedy).value,
           est.at(ConstantKind::VallePoussinQuasiGreedy));
    record("qglc", d, est.at(ConstantKind::Qglc).value, est.at(ConstantKind::Qglc));
    record("tqg", d, est.at(ConstantKind::TruncationQuasiGreedy).value, est.at(ConstantKind::TruncationQuasiGreedy));
    record("almost_greedy", d, est.at(ConstantKind::AlmostGreedy).value, est.at(ConstantKind::AlmostGreedy));

    const auto phi = phi_function(trunc, {0.25}, cfg);
    record("near_unconditional", d, phi.grid.front().estimate.value, phi.grid.front().estimate);
    const std::size_t window = std::min<std::size_t>(d, 14);
    const auto succ = succ_constant(trunc, window);
    record("unconditional", d, succ.value, succ);
    const auto ucc = ucc_constant(trunc, window);
    record("ucc", d, ucc.value, ucc);

    DemocracyConfig dc;
    dc.window = d;
    const double dem = democracy_ratio(democracy_functions(trunc, 1, d, SignMode::ConstantSigns, dc));
    const double sdem = democracy_ratio(democracy_functions(trunc, 1, d, SignMode::AllSigns, dc));
    record("democratic", d, dem, std::nullopt);
    record("superdemocratic", d, sdem, std::nullopt);

    last_cqg = est.at(ConstantKind::CesaroQuasiGreedy).value;
    last_vpqg = est.at(ConstantKind::VallePoussinQuasiGreedy).value;
    last_ag = est.at(ConstantKind::AlmostGreedy).value;
    last_dem = dem;
  }

  for (auto& [name, p] : by_name) p.verdict = trend(p.trace, config.growth_ratio);
  // Propagate failures along the implication chain until nothing changes.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [source, targets] : implications()) {
      if (!fails(by_name.at(source).verdict)) continue;
      for (const auto& t : targets) {
        auto& p = by_name.at(t);
        if (p.implied_by.empty()) {
          p.implied_by = source;
          p.verdict = Verdict::FailsWithWitness;
          changed = true;
        }
      }
    }
  }

  ClassificationReport r;
  r.space = space.label();
  for (const auto& name : property_names()) r.properties.push_back(by_name.at(name));

  const Verdict ag = r.at("almost_greedy").verdict;
  const Verdict cd = both(r.at("cqg").verdict, r.at("democratic").verdict);
  const Verdict vd = both(r.at("vpqg").verdict, r.at("democratic").verdict);
  r.panel["dimension"] = dims.back();
  r.panel["almost_greedy"] = Json{{"estimate", last_ag}, {"verdict", to_string(ag)}};
  r.panel["cqg_democratic"] =
      Json{{"cqg", last_cqg}, {"democracy", last_dem}, {"verdict", to_string(cd)}};
  r.panel["vpqg_democratic"] =
      Json{{"vpqg", last_vpqg}, {"democracy", last_dem}, {"verdict", to_string(vd)}};
  r.panel["agree"] = (holds(ag) == holds(cd) && holds(cd) == holds(vd)) &&
                     (fails(ag) == fails(cd) && fails(cd) == fails(vd));
  return r;
}

Json to_json(const ClassificationReport& r) {
  Json j;
  j["space"] = r.space;
  Json props = Json::array();
  for (const auto& p : r.properties) {
    Json q;
    q["property"] = p.property;
    q["verdict"] = to_string(p.verdict);
    Json trace = Json::array();
    for (const auto& [d, v] : p.trace) trace.push_back(Json::array({d, v}));
    q["trace"] = trace;
    q["bound"] = p.bound;
    q["implied_by"] = p.implied_by.empty() ? Json(nullptr) : Json(p.implied_by);
    q["witness"] = p.witness ? to_json(*p.witness) : Json(nullptr);
    props.push_back(q);
  }
  j["properties"] = props;
  j["panel"] = r.panel;
  return j;
}

}  // namespace tga
