#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tga/coef_vector.hpp"

namespace tga {

/// Positive weight sequence (w_n)_{n>=1} given by a closed-form tag or explicit values.
class WeightSequence {
 public:
  enum class Kind { Harmonic, Geometric, Constant, Explicit };

  static WeightSequence harmonic();
  /// w_n = r^n.
  static WeightSequence geometric(double r);
  static WeightSequence constant(double c = 1.0);
  static WeightSequence explicit_values(std::vector<double> values);
  /// Accepts "harmonic", "geometric(r)", "constant", "constant(c)".
  static WeightSequence parse(const std::string& tag);

  double operator()(Index n) const;
  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return parameter_; }
  const std::vector<double>& values() const noexcept { return values_; }
  /// Largest index with a defined weight (explicit arrays only).
  std::size_t length_limit() const noexcept;
  std::string tag() const;

  friend bool operator==(const WeightSequence&, const WeightSequence&) = default;

 private:
  Kind kind_ = Kind::Harmonic;
  double parameter_ = 1.0;
  std::vector<double> values_;
};

class SpaceSpec;

struct LpFamily {
  double p = 2.0;  ///< 1 <= p, infinity allowed
};
struct SummingC0Family {};
struct LorentzFamily {
  WeightSequence w;
};
struct WeightedL1Family {
  WeightSequence w;
};
struct MaxFunctionalsFamily {
  std::vector<CoefVector> functionals;
};
struct CircRenormFamily {
  std::shared_ptr<const SpaceSpec> inner;
};

using SpaceFamily = std::variant<LpFamily, SummingC0Family, LorentzFamily, WeightedL1Family,
                                 MaxFunctionalsFamily, CircRenormFamily>;

enum class DualRoute { ClosedForm, VertexEnumeration, Simplex };

struct DualNormResult {
  double value = 1.0;
  DualRoute route = DualRoute::ClosedForm;
};

struct AlphaConstants {
  double alpha1 = 1.0;  ///< sup_n ||x_n||
  double alpha2 = 1.0;  ///< sup_n ||x_n^*||
  double alpha3 = 1.0;  ///< sup_n ||x_n|| ||x_n^*||
};

/// Immutable norm oracle for vectors supported in [1, cap].
class SpaceSpec {
 public:
  static constexpr std::size_t kDefaultCap = 512;

  static SpaceSpec lp(double p, std::size_t cap = kDefaultCap);
  static SpaceSpec summing_c0(std::size_t cap = kDefaultCap);
  static SpaceSpec lorentz(WeightSequence w, std::size_t cap = kDefaultCap);
  static SpaceSpec weighted_l1(WeightSequence w, std::size_t cap = kDefaultCap);
  static SpaceSpec max_functionals(std::vector<CoefVector> functionals,
                                   std::size_t cap = kDefaultCap);
  /// ||x||_o = max(||x|| / alpha1, ||x||_inf); both the basis and its duals become normalized.
  static SpaceSpec circ_renorm(const SpaceSpec& inner);
  /// Same, with the scaling constant given explicitly (as kept by truncation).
  static SpaceSpec circ_renorm(const SpaceSpec& inner, double inner_alpha1);

  const SpaceFamily& family() const noexcept { return family_; }
  /// CircRenorm: alpha1 of the inner space used in the renorming.
  double inner_alpha1() const noexcept { return inner_alpha1_; }
  std::size_t cap() const noexcept { return cap_; }
  std::string label() const;

  double norm(const CoefVector& x) const;
  /// dense[i] is the coefficient of index i + 1; dense.size() <= cap().
  double norm_dense(std::span<const double> dense) const;

  /// ||x_n||.
  double basis_norm(Index n) const;
  /// ||x_n^*|| = sup{|a_n| : ||a|| <= 1}.
  double dual_norm(Index n) const { return dual_norm_with_route(n).value; }
  DualNormResult dual_norm_with_route(Index n) const;
  AlphaConstants alpha() const { return *alpha_; }

  /// Same norm restricted to vectors supported in [1, cap]. Dual norms are those of
  /// the restricted space.
  SpaceSpec truncated(std::size_t cap) const;

  /// ||sum eps_n a_n x_n|| = ||sum a_n x_n|| for all signs.
  bool sign_invariant() const;

 private:
  SpaceSpec(SpaceFamily family, std::size_t cap);
  void finalize();
  void check_index(Index n) const;

  SpaceFamily family_;
  std::size_t cap_ = kDefaultCap;
  // CircRenorm: alpha1 of the inner space, fixed at construction so truncation keeps the norm.
  double inner_alpha1_ = 1.0;
  // MaxFunctionals: functionals as dense arrays over [1, cap].
  std::shared_ptr<const std::vector<std::vector<double>>> dense_functionals_;
  // Lorentz / WeightedL1: w_1..w_cap.
  std::shared_ptr<const std::vector<double>> dense_weights_;
  std::shared_ptr<const AlphaConstants> alpha_;
};

double norm(const SpaceSpec& space, const CoefVector& x);
double dual_norm(const SpaceSpec& space, Index n);
AlphaConstants alpha_constants(const SpaceSpec& space);

std::string to_string(DualRoute route);

/// sup{ a_n : |a_k| <= 1, |<f, a>| <= 1 for every f } over coordinates touched by the
/// functionals; exposed for testing the two solution routes against each other.
DualNormResult max_functionals_dual(const std::vector<CoefVector>& functionals, Index n,
                                    bool force_simplex = false);

}  // namespace tga
