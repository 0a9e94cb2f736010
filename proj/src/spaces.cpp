#include "tga/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "tga/errors.hpp"
#include "tga/format.hpp"

namespace tga {

// ---------------------------------------------------------------- weights

WeightSequence WeightSequence::harmonic() { return WeightSequence{}; }

WeightSequence WeightSequence::geometric(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("geometric weight ratio must be positive");
  WeightSequence w;
  w.kind_ = Kind::Geometric;
  w.parameter_ = r;
  return w;
}

WeightSequence WeightSequence::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("constant weight must be positive");
  WeightSequence w;
  w.kind_ = Kind::Constant;
  w.parameter_ = c;
  return w;
}

WeightSequence WeightSequence::explicit_values(std::vector<double> values) {
  if (values.empty()) throw InputError("explicit weight array is empty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("weights must be positive and finite");
  }
  WeightSequence w;
  w.kind_ = Kind::Explicit;
  w.values_ = std::move(values);
  return w;
}

WeightSequence WeightSequence::parse(const std::string& tag) {
  if (tag == "harmonic") return harmonic();
  if (tag == "constant") return constant(1.0);
  auto arg = [&](const std::string& head) -> double {
    const std::string body = tag.substr(head.size() + 1, tag.size() - head.size() - 2);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(body, &used);
    } catch (const std::exception&) {
      throw InputError("bad weight tag '" + tag + "'");
    }
    if (used != body.size()) throw InputError("bad weight tag '" + tag + "'");
    return v;
  };
  auto wrapped = [&](const std::string& head) {
    return tag.size() > head.size() + 2 && tag.compare(0, head.size() + 1, head + "(") == 0 &&
           tag.back() == ')';
  };
  if (wrapped("geometric")) return geometric(arg("geometric"));
  if (wrapped("constant")) return constant(arg("constant"));
  throw InputError("unknown weight tag '" + tag + "'");
}

double WeightSequence::operator()(Index n) const {
  if (n == 0) throw DomainError("weights are indexed from 1");
  switch (kind_) {
    case Kind::Harmonic:
      return 1.0 / static_cast<double>(n);
    case Kind::Geometric:
      return std::pow(parameter_, static_cast<double>(n));
    case Kind::Constant:
      return parameter_;
    case Kind::Explicit:
      if (n > values_.size()) throw DomainError("explicit weights end at index " + std::to_string(values_.size()));
      return values_[n - 1];
  }
  return 1.0;
}

std::size_t WeightSequence::length_limit() const noexcept {
  return kind_ == Kind::Explicit ? values_.size() : std::numeric_limits<std::size_t>::max();
}

std::string WeightSequence::tag() const {
  switch (kind_) {
    case Kind::Harmonic:
      return "harmonic";
    case Kind::Geometric:
      return "geometric(" + format_number(parameter_) + ")";
    case Kind::Constant:
      return parameter_ == 1.0 ? "constant" : "constant(" + format_number(parameter_) + ")";
    case Kind::Explicit:
      return "explicit[" + std::to_string(values_.size()) + "]";
  }
  return "";
}

// ---------------------------------------------------------------- construction

SpaceSpec::SpaceSpec(SpaceFamily family, std::size_t cap) : family_(std::move(family)), cap_(cap) {
  if (cap_ == 0) throw InputError("dimension cap must be positive");
}

SpaceSpec SpaceSpec::lp(double p, std::size_t cap) {
  if (!(p >= 1.0)) throw InputError("Lp requires p >= 1");
  SpaceSpec s(LpFamily{p}, cap);
  s.finalize();
  return s;
}

SpaceSpec SpaceSpec::summing_c0(std::size_t cap) {
  SpaceSpec s(SummingC0Family{}, cap);
  s.finalize();
  return s;
}

SpaceSpec SpaceSpec::lorentz(WeightSequence w, std::size_t cap) {
  if (w.length_limit() < cap) throw InputError("explicit Lorentz weights shorter than the dimension cap");
  double prev = std::numeric_limits<double>::infinity();
  for (Index n = 1; n <= cap; ++n) {
    const double v = w(n);
    if (!(v > 0.0)) throw InputError("Lorentz weights must be positive (underflow at index " + std::to_string(n) + ")");
    if (v > prev) throw InputError("Lorentz weights must be non-increasing");
    prev = v;
  }
  SpaceSpec s(LorentzFamily{std::move(w)}, cap);
  s.finalize();
  return s;
}

SpaceSpec SpaceSpec::weighted_l1(WeightSequence w, std::size_t cap) {
  if (w.length_limit() < cap) throw InputError("explicit weights shorter than the dimension cap");
  for (Index n = 1; n <= cap; ++n) {
    const double v = w(n);
    if (!(v > 0.0) || !std::isfinite(v))
      throw InputError("weights must be positive and finite (index " + std::to_string(n) + ")");
  }
  SpaceSpec s(WeightedL1Family{std::move(w)}, cap);
  s.finalize();
  return s;
}

SpaceSpec SpaceSpec::max_functionals(std::vector<CoefVector> functionals, std::size_t cap) {
  if (functionals.empty()) throw InputError("MaxFunctionals needs at least one functional");
  for (const auto& f : functionals) {
    if (f.max_index() > cap) throw DomainError("functional support exceeds the dimension cap");
  }
  SpaceSpec s(MaxFunctionalsFamily{std::move(functionals)}, cap);
  s.finalize();
  return s;
}

SpaceSpec SpaceSpec::circ_renorm(const SpaceSpec& inner) { return circ_renorm(inner, inner.alpha().alpha1); }

SpaceSpec SpaceSpec::circ_renorm(const SpaceSpec& inner, double inner_alpha1) {
  if (!(inner_alpha1 > 0.0) || !std::isfinite(inner_alpha1)) throw InputError("renorming constant must be positive");
  SpaceSpec s(CircRenormFamily{std::make_shared<const SpaceSpec>(inner)}, inner.cap());
  s.inner_alpha1_ = inner_alpha1;
  s.finalize();
  return s;
}

void SpaceSpec::finalize() {
  auto tabulate = [&](const WeightSequence& w) {
    auto table = std::make_shared<std::vector<double>>(cap_);
    for (Index n = 1; n <= cap_; ++n) (*table)[n - 1] = w(n);
    dense_weights_ = std::move(table);
  };
  if (const auto* lz = std::get_if<LorentzFamily>(&family_)) tabulate(lz->w);
  if (const auto* wl = std::get_if<WeightedL1Family>(&family_)) tabulate(wl->w);
  if (const auto* mf = std::get_if<MaxFunctionalsFamily>(&family_)) {
    auto dense = std::make_shared<std::vector<std::vector<double>>>();
    for (const auto& f : mf->functionals) {
      std::vector<double> row(cap_, 0.0);
      for (const auto& [k, v] : f) row[k - 1] = v;
      dense->push_back(std::move(row));
    }
    dense_functionals_ = std::move(dense);
  }
  AlphaConstants a{0.0, 0.0, 0.0};
  for (Index n = 1; n <= cap_; ++n) {
    const double b = basis_norm(n);
    const double d = dual_norm_with_route(n).value;
    a.alpha1 = std::max(a.alpha1, b);
    a.alpha2 = std::max(a.alpha2, d);
    a.alpha3 = std::max(a.alpha3, b * d);
  }
  alpha_ = std::make_shared<const AlphaConstants>(a);
}

SpaceSpec SpaceSpec::truncated(std::size_t cap) const {
  if (cap == 0) throw InputError("dimension cap must be positive");
  if (cap > cap_) throw DomainError("cannot truncate to a larger dimension cap");
  return std::visit(
      [&](const auto& fam) -> SpaceSpec {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, LpFamily>) {
          return lp(fam.p, cap);
        } else if constexpr (std::is_same_v<F, SummingC0Family>) {
          return summing_c0(cap);
        } else if constexpr (std::is_same_v<F, LorentzFamily>) {
          return lorentz(fam.w, cap);
        } else if constexpr (std::is_same_v<F, WeightedL1Family>) {
          return weighted_l1(fam.w, cap);
        } else if constexpr (std::is_same_v<F, MaxFunctionalsFamily>) {
          std::vector<CoefVector> cut;
          for (const auto& f : fam.functionals) {
            CoefVector g;
            for (const auto& [k, v] : f) {
              if (k <= cap) g.set(k, v);
            }
            cut.push_back(std::move(g));
          }
          return max_functionals(std::move(cut), cap);
        } else {
          SpaceSpec s(CircRenormFamily{std::make_shared<const SpaceSpec>(fam.inner->truncated(cap))}, cap);
          s.inner_alpha1_ = inner_alpha1_;
          s.finalize();
          return s;
        }
      },
      family_);
}

// ---------------------------------------------------------------- queries

std::string SpaceSpec::label() const {
  return std::visit(
      [&](const auto& fam) -> std::string {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, LpFamily>) {
          return std::isinf(fam.p) ? "Lp(inf)" : "Lp(" + format_number(fam.p) + ")";
        } else if constexpr (std::is_same_v<F, SummingC0Family>) {
          return "SummingC0";
        } else if constexpr (std::is_same_v<F, LorentzFamily>) {
          return "Lorentz(" + fam.w.tag() + ")";
        } else if constexpr (std::is_same_v<F, WeightedL1Family>) {
          return "WeightedL1(" + fam.w.tag() + ")";
        } else if constexpr (std::is_same_v<F, MaxFunctionalsFamily>) {
          return "MaxFunctionals(" + std::to_string(fam.functionals.size()) + ")";
        } else {
          return "CircRenorm(" + fam.inner->label() + ")";
        }
      },
      family_);
}

bool SpaceSpec::sign_invariant() const {
  return std::visit(
      [](const auto& fam) -> bool {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, CircRenormFamily>) {
          return fam.inner->sign_invariant();
        } else {
          return std::is_same_v<F, LpFamily> || std::is_same_v<F, LorentzFamily> ||
                 std::is_same_v<F, WeightedL1Family>;
        }
      },
      family_);
}

void SpaceSpec::check_index(Index n) const {
  if (n == 0 || n > cap_)
    throw DomainError("index " + std::to_string(n) + " outside [1, " + std::to_string(cap_) + "]");
}

namespace {

double lp_dense(std::span<const double> a, double p) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  if (m == 0.0 || std::isinf(p)) return m;
  if (p == 1.0) {
    double s = 0.0;
    for (double v : a) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (double v : a) {
      const double r = v / m;
      s += r * r;
    }
    return m * std::sqrt(s);
  }
  for (double v : a) {
    if (v != 0.0) s += std::pow(std::abs(v) / m, p);
  }
  return m * std::pow(s, 1.0 / p);
}

double summing_dense(std::span<const double> a) {
  double tail = 0.0;
  double best = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) {
    tail += a[i];
    best = std::max(best, std::abs(tail));
  }
  return best;
}

double lorentz_dense(std::span<const double> a, const std::vector<double>& w) {
  thread_local std::vector<double> buf;
  buf.clear();
  for (double v : a) {
    if (v != 0.0) buf.push_back(std::abs(v));
  }
  std::sort(buf.begin(), buf.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) s += buf[i] * w[i];
  return s;
}

double weighted_dense(std::span<const double> a, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0.0) s += w[i] * std::abs(a[i]);
  }
  return s;
}

double sup_dense(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double SpaceSpec::norm_dense(std::span<const double> dense) const {
  if (dense.size() > cap_)
    throw DomainError("dense vector of length " + std::to_string(dense.size()) + " exceeds cap " +
                      std::to_string(cap_));
  return std::visit(
      [&](const auto& fam) -> double {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, LpFamily>) {
          return lp_dense(dense, fam.p);
        } else if constexpr (std::is_same_v<F, SummingC0Family>) {
          return summing_dense(dense);
        } else if constexpr (std::is_same_v<F, LorentzFamily>) {
          return lorentz_dense(dense, *dense_weights_);
        } else if constexpr (std::is_same_v<F, WeightedL1Family>) {
          return weighted_dense(dense, *dense_weights_);
        } else if constexpr (std::is_same_v<F, MaxFunctionalsFamily>) {
          double best = sup_dense(dense);
          for (const auto& row : *dense_functionals_) {
            double s = 0.0;
            for (std::size_t i = 0; i < dense.size(); ++i) s += row[i] * dense[i];
            best = std::max(best, std::abs(s));
          }
          return best;
        } else {
          return std::max(fam.inner->norm_dense(dense) / inner_alpha1_, sup_dense(dense));
        }
      },
      family_);
}

double SpaceSpec::norm(const CoefVector& x) const {
  const Index top = x.max_index();
  if (top > cap_)
    throw DomainError("support index " + std::to_string(top) + " exceeds cap " + std::to_string(cap_));
  thread_local std::vector<double> dense;
  dense.assign(top, 0.0);
  for (const auto& [n, v] : x) dense[n - 1] = v;
  return norm_dense(dense);
}

double SpaceSpec::basis_norm(Index n) const {
  check_index(n);
  return std::visit(
      [&](const auto& fam) -> double {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, LorentzFamily>) {
          return fam.w(1);
        } else if constexpr (std::is_same_v<F, WeightedL1Family>) {
          return fam.w(n);
        } else if constexpr (std::is_same_v<F, MaxFunctionalsFamily>) {
          double b = 1.0;
          for (const auto& row : *dense_functionals_) b = std::max(b, std::abs(row[n - 1]));
          return b;
        } else {
          return 1.0;
        }
      },
      family_);
}

DualNormResult SpaceSpec::dual_norm_with_route(Index n) const {
  check_index(n);
  return std::visit(
      [&](const auto& fam) -> DualNormResult {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, SummingC0Family>) {
          // a_n = T_n - T_{n+1} with |T_k| <= 1 and T_{cap+1} = 0.
          return {n < cap_ ? 2.0 : 1.0, DualRoute::ClosedForm};
        } else if constexpr (std::is_same_v<F, LorentzFamily>) {
          return {1.0 / fam.w(1), DualRoute::ClosedForm};
        } else if constexpr (std::is_same_v<F, WeightedL1Family>) {
          return {1.0 / fam.w(n), DualRoute::ClosedForm};
        } else if constexpr (std::is_same_v<F, MaxFunctionalsFamily>) {
          return max_functionals_dual(fam.functionals, n);
        } else {
          return {1.0, DualRoute::ClosedForm};
        }
      },
      family_);
}

double norm(const SpaceSpec& space, const CoefVector& x) { return space.norm(x); }
double dual_norm(const SpaceSpec& space, Index n) { return space.dual_norm(n); }
AlphaConstants alpha_constants(const SpaceSpec& space) { return space.alpha(); }

std::string to_string(DualRoute route) {
  switch (route) {
    case DualRoute::ClosedForm:
      return "closed_form";
    case DualRoute::VertexEnumeration:
      return "vertex_enumeration";
    case DualRoute::Simplex:
      return "simplex";
  }
  return "";
}

}  // namespace tga
