#include "tga/serialize.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "tga/errors.hpp"
#include "serialize_internal.hpp"

namespace tga {

using detail::field;
using detail::get_as;

namespace {

Json weights_json(const WeightSequence& w) {
  if (w.kind() != WeightSequence::Kind::Explicit) return w.tag();
  Json arr = Json::array();
  for (double v : w.values()) arr.push_back(v);
  return arr;
}

WeightSequence weights_from_json(const Json& j) {
  if (j.is_string()) return WeightSequence::parse(j.get<std::string>());
  if (j.is_array()) return WeightSequence::explicit_values(get_as<std::vector<double>>(j, "weights"));
  throw InputError("weights must be a tag or an array");
}

std::size_t cap_from(const Json& j) {
  if (!j.contains("cap")) return SpaceSpec::kDefaultCap;
  const auto& c = j.at("cap");
  if (!c.is_number_integer() || c.get<long long>() <= 0) throw InputError("cap must be a positive integer");
  return c.get<std::size_t>();
}

}  // namespace

Json to_json(const CoefVector& x) {
  Json arr = Json::array();
  for (const auto& [n, v] : x) arr.push_back(Json::array({n, v}));
  return arr;
}

CoefVector coef_vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("coefficient vector must be an array of [index, value] pairs");
  CoefVector x;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number())
      throw InputError("coefficient entries must be [index, value] pairs");
    const long long n = e[0].get<long long>();
    if (n < 1) throw InputError("indices are 1-based");
    if (x.contains(static_cast<Index>(n))) throw InputError("repeated index in coefficient vector");
    x.set(static_cast<Index>(n), e[1].get<double>());
  }
  return x;
}

Json to_json(const IndexSet& a) {
  Json arr = Json::array();
  for (Index n : a) arr.push_back(n);
  return arr;
}

IndexSet index_set_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("index set must be an array");
  IndexSet a;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<long long>() < 1) throw InputError("indices are positive integers");
    a.insert(e.get<Index>());
  }
  return a;
}

Json to_json(const SignPattern& eps) {
  Json arr = Json::array();
  for (const auto& [n, s] : eps.signs()) arr.push_back(Json::array({n, s}));
  return arr;
}

SignPattern sign_pattern_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("sign pattern must be an array of [index, sign] pairs");
  SignPattern eps;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw InputError("sign entries must be [index, sign] pairs");
    const long long n = e[0].get<long long>();
    const int s = e[1].get<int>();
    if (n < 1 || (s != 1 && s != -1)) throw InputError("signs must be +1 or -1 on positive indices");
    eps.set(static_cast<Index>(n), s);
  }
  return eps;
}

Json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw InputError("expected a number");
}

Json to_json(const SpaceSpec& space) {
  Json j = Json::object();
  std::visit(
      [&](const auto& fam) {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, LpFamily>) {
          j["family"] = "lp";
          j["p"] = number_json(fam.p);
        } else if constexpr (std::is_same_v<F, SummingC0Family>) {
          j["family"] = "summing_c0";
        } else if constexpr (std::is_same_v<F, LorentzFamily>) {
          j["family"] = "lorentz";
          j["weights"] = weights_json(fam.w);
        } else if constexpr (std::is_same_v<F, WeightedL1Family>) {
          j["family"] = "weighted_l1";
          j["weights"] = weights_json(fam.w);
        } else if constexpr (std::is_same_v<F, MaxFunctionalsFamily>) {
          j["family"] = "max_functionals";
          Json fs = Json::array();
          for (const auto& f : fam.functionals) fs.push_back(to_json(f));
          j["functionals"] = fs;
        } else {
          j["family"] = "circ_renorm";
          j["inner"] = to_json(*fam.inner);
          j["inner_alpha1"] = space.inner_alpha1();
        }
      },
      space.family());
  j["cap"] = space.cap();
  return j;
}

SpaceSpec space_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("space record must be an object");
  const auto family = get_as<std::string>(field(j, "family"), "family");
  if (family == "circ_renorm") {
    const SpaceSpec inner = space_from_json(field(j, "inner"));
    SpaceSpec s = j.contains("inner_alpha1")
                      ? SpaceSpec::circ_renorm(inner, number_from_json(j.at("inner_alpha1")))
                      : SpaceSpec::circ_renorm(inner);
    if (j.contains("cap") && cap_from(j) != s.cap()) s = s.truncated(cap_from(j));
    return s;
  }
  const std::size_t cap = cap_from(j);
  if (family == "lp") return SpaceSpec::lp(j.contains("p") ? number_from_json(j.at("p")) : 2.0, cap);
  if (family == "summing_c0") return SpaceSpec::summing_c0(cap);
  if (family == "lorentz") return SpaceSpec::lorentz(weights_from_json(field(j, "weights")), cap);
  if (family == "weighted_l1") return SpaceSpec::weighted_l1(weights_from_json(field(j, "weights")), cap);
  if (family == "max_functionals") {
    std::vector<CoefVector> fs;
    const auto& arr = field(j, "functionals");
    if (!arr.is_array()) throw InputError("functionals must be an array");
    for (const auto& f : arr) fs.push_back(coef_vector_from_json(f));
    return SpaceSpec::max_functionals(std::move(fs), cap);
  }
  throw InputError("unknown space family '" + family + "'");
}

std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '.') {
      out.push_back(static_cast<char>(std::tolower(u)));
    } else if (!out.empty() && out.back() != '-') {
      out.push_back('-');
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "space" : out;
}

Json to_json(const Witness& w, ConstantKind kind) {
  Json j = Json::object();
  switch (kind) {
    case ConstantKind::QuasiGreedy:
    case ConstantKind::SuppressionQuasiGreedy:
    case ConstantKind::TruncationQuasiGreedy:
      j["x"] = to_json(w.x);
      j["set_a"] = to_json(w.set_a);
      break;
    case ConstantKind::AlmostGreedy:
      j["x"] = to_json(w.x);
      j["set_a"] = to_json(w.set_a);
      j["set_b"] = to_json(w.set_b);
      break;
    case ConstantKind::CesaroQuasiGreedy:
    case ConstantKind::VallePoussinQuasiGreedy:
      j["x"] = to_json(w.x);
      j["ordering"] = w.ordering;
      j["n"] = w.n;
      break;
    case ConstantKind::SuppressionUcc:
      j["eps"] = to_json(w.eps);
      j["set_a"] = to_json(w.set_a);
      j["set_b"] = to_json(w.set_b);
      break;
    case ConstantKind::Ucc:
      j["eps"] = to_json(w.eps);
      j["eps2"] = to_json(w.eps2);
      j["set_a"] = to_json(w.set_a);
      break;
    case ConstantKind::Qglc:
      j["eps"] = to_json(w.eps);
      j["set_a"] = to_json(w.set_a);
      j["x"] = to_json(w.x);
      break;
    case ConstantKind::NearUnconditionality:
      j["x"] = to_json(w.x);
      j["t"] = w.t;
      j["set_a"] = to_json(w.set_a);
      break;
    case ConstantKind::ThresholdingBoundedness:
      j["x"] = to_json(w.x);
      j["t"] = w.t;
      break;
    case ConstantKind::SignedNearUnconditionality:
      j["x"] = to_json(w.x);
      j["t"] = w.t;
      j["multipliers"] = to_json(w.multipliers);
      break;
    case ConstantKind::Psi:
      j["x"] = to_json(w.x);
      j["y"] = to_json(w.y);
      j["z"] = to_json(w.z);
      j["multipliers"] = to_json(w.multipliers);
      j["t"] = w.t;
      j["s"] = w.s;
      break;
  }
  return j;
}

Witness witness_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("witness must be an object");
  Witness w;
  if (j.contains("x")) w.x = coef_vector_from_json(j.at("x"));
  if (j.contains("y")) w.y = coef_vector_from_json(j.at("y"));
  if (j.contains("z")) w.z = coef_vector_from_json(j.at("z"));
  if (j.contains("ordering")) w.ordering = get_as<std::vector<Index>>(j.at("ordering"), "ordering");
  if (j.contains("n")) w.n = get_as<std::size_t>(j.at("n"), "n");
  if (j.contains("set_a")) w.set_a = index_set_from_json(j.at("set_a"));
  if (j.contains("set_b")) w.set_b = index_set_from_json(j.at("set_b"));
  if (j.contains("eps")) w.eps = sign_pattern_from_json(j.at("eps"));
  if (j.contains("eps2")) w.eps2 = sign_pattern_from_json(j.at("eps2"));
  if (j.contains("multipliers")) w.multipliers = sign_pattern_from_json(j.at("multipliers"));
  if (j.contains("t")) w.t = number_from_json(j.at("t"));
  if (j.contains("s")) w.s = number_from_json(j.at("s"));
  return w;
}

Json to_json(const SearchBudget& b) {
  Json j = Json::object();
  j["seed"] = b.seed;
  j["samples"] = b.samples;
  j["family"] = b.family;
  j["instances"] = b.instances;
  j["evaluations"] = b.evaluations;
  j["truncated"] = b.truncated;
  j["skipped"] = b.skipped;
  return j;
}

Json to_json(const ConstantEstimate& e) {
  Json j = Json::object();
  j["constant"] = to_string(e.kind);
  j["value"] = number_json(e.value);
  j["mode"] = to_string(e.mode);
  j["witness"] = to_json(e.witness, e.kind);
  j["budget"] = to_json(e.budget);
  return j;
}

ExhaustiveFamily family_from_json(const Json& j) {
  ExhaustiveFamily f;
  if (!j.is_object()) throw InputError("exhaustive family must be an object");
  if (j.contains("dimension")) f.dimension = get_as<std::size_t>(j.at("dimension"), "dimension");
  if (j.contains("levels")) f.levels = get_as<std::vector<double>>(j.at("levels"), "levels");
  if (j.contains("ordering_cap")) f.ordering_cap = get_as<std::size_t>(j.at("ordering_cap"), "ordering_cap");
  validate(f);
  return f;
}

Json to_json(const ExhaustiveFamily& f) {
  Json j = Json::object();
  j["dimension"] = f.dimension;
  j["levels"] = f.levels;
  j["ordering_cap"] = f.ordering_cap;
  return j;
}

SearchConfig search_config_from_json(const Json& j, SearchConfig c) {
  if (!j.is_object()) throw InputError("search budget must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") {
      c.seed = get_as<std::uint64_t>(value, "seed");
    } else if (key == "samples") {
      c.samples = get_as<std::size_t>(value, "samples");
    } else if (key == "min_support") {
      c.min_support = get_as<std::size_t>(value, "min_support");
    } else if (key == "max_support") {
      c.max_support = get_as<std::size_t>(value, "max_support");
    } else if (key == "dimension") {
      c.dimension = get_as<std::size_t>(value, "dimension");
    } else if (key == "ordering_cap") {
      c.ordering_cap = get_as<std::size_t>(value, "ordering_cap");
    } else if (key == "subset_bits") {
      c.subset_bits = get_as<std::size_t>(value, "subset_bits");
    } else if (key == "profiles") {
      c.profiles.clear();
      for (const auto& p : value) c.profiles.push_back(Profile::parse(get_as<std::string>(p, "profiles")));
    } else if (key == "exhaustive") {
      if (value.is_null()) {
        c.exhaustive.reset();
      } else {
        c.exhaustive = family_from_json(value);
      }
    } else if (key == "jobs") {
      c.jobs = get_as<unsigned>(value, "jobs");
    } else {
      throw InputError("unknown search field '" + key + "'");
    }
  }
  if (c.min_support == 0 || c.min_support > c.max_support) throw InputError("support bounds must satisfy 1 <= min <= max");
  return c;
}

Json to_json(const SearchConfig& c) {
  Json j = Json::object();
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["min_support"] = c.min_support;
  j["max_support"] = c.max_support;
  j["dimension"] = c.dimension;
  Json ps = Json::array();
  for (const auto& p : c.profiles) ps.push_back(p.tag());
  j["profiles"] = ps;
  j["ordering_cap"] = c.ordering_cap;
  j["subset_bits"] = c.subset_bits;
  j["exhaustive"] = c.exhaustive ? to_json(*c.exhaustive) : Json(nullptr);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tga
