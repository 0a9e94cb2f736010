#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "tga/constants.hpp"
#include "tga/errors.hpp"
#include "tga/greedy.hpp"

namespace tga {

namespace {

constexpr std::array<std::pair<ConstantKind, const char*>, 13> kNames{{
    {ConstantKind::QuasiGreedy, "qg"},
    {ConstantKind::SuppressionQuasiGreedy, "suppression_qg"},
    {ConstantKind::CesaroQuasiGreedy, "cqg"},
    {ConstantKind::VallePoussinQuasiGreedy, "vpqg"},
    {ConstantKind::SuppressionUcc, "succ"},
    {ConstantKind::Ucc, "ucc"},
    {ConstantKind::Qglc, "qglc"},
    {ConstantKind::TruncationQuasiGreedy, "tqg"},
    {ConstantKind::AlmostGreedy, "almost_greedy"},
    {ConstantKind::NearUnconditionality, "phi"},
    {ConstantKind::ThresholdingBoundedness, "theta"},
    {ConstantKind::SignedNearUnconditionality, "phi_u"},
    {ConstantKind::Psi, "psi"},
}};

double ratio(double num, double den, const char* what) {
  if (!(den > 0.0)) throw DomainError(std::string("witness has a zero denominator (") + what + ")");
  return num / den;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError("invalid witness: " + what);
}

bool subset_of(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

CoefVector apply_multipliers(const CoefVector& x, const SignPattern& a) {
  CoefVector out;
  for (const auto& [n, sign] : a.signs()) out.set(n, sign * x[n]);
  return out;
}

}  // namespace

std::string to_string(ConstantKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ConstantKind constant_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw InputError("unknown constant '" + name + "'");
}

std::string to_string(EstimateMode mode) {
  return mode == EstimateMode::ExactOverFamily ? "ExactOverFamily" : "RandomSearch";
}

double evaluate_witness(const SpaceSpec& space, ConstantKind kind, const Witness& w) {
  switch (kind) {
    case ConstantKind::QuasiGreedy:
      require(is_greedy_set(w.x, w.set_a), "set is not a greedy set");
      return ratio(space.norm(projection(w.x, w.set_a)), space.norm(w.x), "qg");
    case ConstantKind::SuppressionQuasiGreedy:
      require(is_greedy_set(w.x, w.set_a), "set is not a greedy set");
      return ratio(space.norm(complement_projection(w.x, w.set_a)), space.norm(w.x), "suppression_qg");
    case ConstantKind::TruncationQuasiGreedy: {
      require(!w.set_a.empty() && is_greedy_set(w.x, w.set_a), "set is not a nonempty greedy set");
      double lo = INFINITY;
      for (Index n : w.set_a) lo = std::min(lo, std::abs(w.x[n]));
      const auto ind = indicator_sum(SignPattern::of(w.x, w.set_a), w.set_a);
      return ratio(lo * space.norm(ind), space.norm(w.x), "tqg");
    }
    case ConstantKind::AlmostGreedy:
      require(is_greedy_set(w.x, w.set_a), "set is not a greedy set");
      require(w.set_b.size() <= w.set_a.size(), "comparison set larger than the greedy set");
      return ratio(space.norm(complement_projection(w.x, w.set_a)),
                   space.norm(complement_projection(w.x, w.set_b)), "almost_greedy");
    case ConstantKind::CesaroQuasiGreedy: {
      const GreedyOrdering o(w.x, w.ordering);
      return ratio(space.norm(cesaro_sum(o, w.n)), space.norm(w.x), "cqg");
    }
    case ConstantKind::VallePoussinQuasiGreedy: {
      const GreedyOrdering o(w.x, w.ordering);
      return ratio(space.norm(vp_sum(o, w.n)), space.norm(w.x), "vpqg");
    }
    case ConstantKind::SuppressionUcc:
      require(subset_of(w.set_b, w.set_a), "B is not a subset of A");
      return ratio(space.norm(indicator_sum(w.eps, w.set_b)), space.norm(indicator_sum(w.eps, w.set_a)), "succ");
    case ConstantKind::Ucc:
      return ratio(space.norm(indicator_sum(w.eps, w.set_a)), space.norm(indicator_sum(w.eps2, w.set_a)), "ucc");
    case ConstantKind::Qglc: {
      require(w.x.in_q(), "tail vector is not in Q");
      for (Index n : w.set_a) require(!w.x.contains(n), "tail vector meets A");
      const auto ind = indicator_sum(w.eps, w.set_a);
      return ratio(space.norm(ind), space.norm(ind + w.x), "qglc");
    }
    case ConstantKind::NearUnconditionality:
      require(subset_of(w.set_a, threshold_set(w.x, w.t)), "set leaves A(x, t)");
      return ratio(space.norm(projection(w.x, w.set_a)), space.norm(w.x), "phi");
    case ConstantKind::ThresholdingBoundedness:
      return ratio(space.norm(projection(w.x, threshold_set(w.x, w.t))), space.norm(w.x), "theta");
    case ConstantKind::SignedNearUnconditionality: {
      const double top = w.x.sup_norm();
      for (const auto& [n, sign] : w.multipliers.signs())
        require(std::abs(w.x[n]) >= w.t * top, "multiplier outside the threshold set");
      return ratio(space.norm(apply_multipliers(w.x, w.multipliers)), space.norm(w.x), "phi_u");
    }
    case ConstantKind::Psi: {
      require(!w.y.empty(), "middle block is empty");
      for (const auto& [n, v] : w.y) require(!w.x.contains(n) && !w.z.contains(n), "supports overlap");
      for (const auto& [n, v] : w.x) require(!w.z.contains(n), "supports overlap");
      require(dominates(w.x, w.y) && dominates(w.y, w.z), "domination chain fails");
      require(static_cast<double>(w.x.support_size()) <= w.t * static_cast<double>(w.y.support_size()),
              "head block too large");
      require(osc(w.y, w.y.support()) <= 1.0 / w.s, "middle block oscillates too much");
      require(w.multipliers.domain() == w.y.support(), "multipliers do not cover the middle block");
      return ratio(space.norm(apply_multipliers(w.y, w.multipliers)), space.norm(w.x + w.y + w.z), "psi");
    }
  }
  throw InputError("unknown constant kind");
}

}  // namespace tga
