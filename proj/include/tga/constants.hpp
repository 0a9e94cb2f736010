#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tga/coef_vector.hpp"
#include "tga/search.hpp"
#include "tga/spaces.hpp"

namespace tga {

enum class ConstantKind {
  QuasiGreedy,
  SuppressionQuasiGreedy,
  CesaroQuasiGreedy,
  VallePoussinQuasiGreedy,
  SuppressionUcc,
  Ucc,
  Qglc,
  TruncationQuasiGreedy,
  AlmostGreedy,
  NearUnconditionality,  ///< phi(t)
  ThresholdingBoundedness,  ///< theta(t)
  SignedNearUnconditionality,  ///< phi_u(t)
  Psi,  ///< Psi(t, s)
};

std::string to_string(ConstantKind kind);
/// Inverse of to_string; throws InputError for unknown names.
ConstantKind constant_kind_from_string(const std::string& name);

/// Inputs realizing one ratio. Which fields are used depends on the kind:
///   QG/SQG/TQG/AlmostGreedy: x, set_a (a greedy set of x), set_b (AlmostGreedy comparison set)
///   CQG/VPQG: x, ordering, n
///   SUCC: eps, set_a, set_b (B subset of A); UCC: eps, eps2, set_a
///   QGLC: eps, set_a, x (x in Q, disjoint from A)
///   phi/theta: x in Q, t, set_a (phi: subset of A(x, t))
///   phi_u: x, t, multipliers on A(x, t) relative to ||x||_inf
///   Psi: x, y, z, multipliers on supp(y), t, s
struct Witness {
  CoefVector x;
  CoefVector y;
  CoefVector z;
  std::vector<Index> ordering;
  std::size_t n = 0;
  IndexSet set_a;
  IndexSet set_b;
  SignPattern eps;
  SignPattern eps2;
  SignPattern multipliers;
  double t = 0.0;
  double s = 0.0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class EstimateMode { ExactOverFamily, RandomSearch };
std::string to_string(EstimateMode mode);

struct SearchBudget {
  std::uint64_t seed = 0;
  std::size_t samples = 0;  ///< configured random samples (0 in family mode)
  std::string family;  ///< family description, empty in random mode
  std::size_t instances = 0;  ///< vectors (or sets) examined
  std::size_t evaluations = 0;  ///< ratios evaluated
  std::size_t truncated = 0;  ///< instances whose enumeration hit a cap
  std::size_t skipped = 0;  ///< generated configurations rejected as inadmissible
};

/// A certified lower bound: value is the ratio realized by the witness.
struct ConstantEstimate {
  ConstantKind kind = ConstantKind::QuasiGreedy;
  double value = 0.0;
  Witness witness;
  SearchBudget budget;
  EstimateMode mode = EstimateMode::RandomSearch;

  std::string name() const { return to_string(kind); }
};

/// Recomputes the defining ratio of `kind` from the witness through the public API.
/// Throws DomainError if the witness does not satisfy the side conditions of the kind.
double evaluate_witness(const SpaceSpec& space, ConstantKind kind, const Witness& witness);

// ---------------------------------------------------------------- vector-searched constants

/// Default grids.
std::vector<double> default_t_grid();  ///< {1, 1/2, 1/4, 1/8, 1/16}
std::vector<double> default_psi_t_grid();  ///< {0, 1/2, 1, 2, 4}
std::vector<double> default_psi_s_grid();  ///< {1, 1/2, 1/4}

/// Estimates every requested scalar kind (QG, SQG, CQG, VPQG, QGLC, TQG, AlmostGreedy)
/// in one pass over the search space. The search runs over config.exhaustive when set,
/// else over config.samples random vectors; mode is ExactOverFamily only when the family
/// was enumerated with no truncation. Throws BudgetError on an empty budget.
std::map<ConstantKind, ConstantEstimate> estimate_constants(const SpaceSpec& space,
                                                            const SearchConfig& config,
                                                            const std::vector<ConstantKind>& kinds);

ConstantEstimate qg_constant(const SpaceSpec& space, const SearchConfig& config);
ConstantEstimate suppression_qg_constant(const SpaceSpec& space, const SearchConfig& config);
ConstantEstimate cqg_constant(const SpaceSpec& space, const SearchConfig& config);
ConstantEstimate vpqg_constant(const SpaceSpec& space, const SearchConfig& config);
ConstantEstimate qglc_constant(const SpaceSpec& space, const SearchConfig& config);
ConstantEstimate tqg_constant(const SpaceSpec& space, const SearchConfig& config);
ConstantEstimate almost_greedy_constant(const SpaceSpec& space, const SearchConfig& config);

struct ThresholdPoint {
  double t = 1.0;
  ConstantEstimate estimate;
};

struct ThresholdFunctionEstimate {
  ConstantKind kind = ConstantKind::NearUnconditionality;
  std::vector<ThresholdPoint> grid;

  /// Value at a grid point; throws InputError for points not on the grid.
  double at(double t) const;
};

/// phi, theta and phi_u on a common grid, from one search.
struct ThresholdFunctions {
  ThresholdFunctionEstimate phi;
  ThresholdFunctionEstimate theta;
  ThresholdFunctionEstimate phi_u;
};

ThresholdFunctions threshold_functions(const SpaceSpec& space, const std::vector<double>& t_grid,
                                       const SearchConfig& config);
ThresholdFunctionEstimate phi_function(const SpaceSpec& space, const std::vector<double>& t_grid,
                                       const SearchConfig& config);
ThresholdFunctionEstimate theta_function(const SpaceSpec& space, const std::vector<double>& t_grid,
                                         const SearchConfig& config);
ThresholdFunctionEstimate phi_u_function(const SpaceSpec& space, const std::vector<double>& t_grid,
                                         const SearchConfig& config);

/// Psi(t, s) for every pair of a grid, plus the step curve osc -> best ratio among
/// configurations admissible for t = curve_t (used to read off Psi(curve_t, 1/M)).
struct PsiGrid {
  std::vector<double> t_values;
  std::vector<double> s_values;
  std::vector<ConstantEstimate> values;  ///< row-major: t index major, s index minor
  double curve_t = 1.0;
  /// Non-decreasing steps (osc, value): the best ratio over admissible configurations
  /// with oscillation <= osc.
  std::vector<std::pair<double, double>> curve;

  const ConstantEstimate& at(double t, double s) const;
  /// Best ratio with oscillation <= m (never below the floor value 1).
  double curve_value(double m) const;
};

PsiGrid psi_grid(const SpaceSpec& space, const std::vector<double>& t_values,
                 const std::vector<double>& s_values, const SearchConfig& config, double curve_t = 1.0);
ConstantEstimate psi_estimate(const SpaceSpec& space, double t, double s, const SearchConfig& config);

// ---------------------------------------------------------------- set-searched constants

/// SUCC over all A subset of [1, window], B subset of A, signs; window <= 14.
ConstantEstimate succ_constant(const SpaceSpec& space, std::size_t max_set_size);
/// UCC over all A subset of [1, window] and sign pairs; window <= 14.
ConstantEstimate ucc_constant(const SpaceSpec& space, std::size_t max_set_size);

enum class SignMode { ConstantSigns, AllSigns };

struct DemocracyConfig {
  std::size_t window = 0;  ///< sets are drawn from [1, window]; 0 means min(cap, 16)
  std::size_t exhaustive_limit = 1000000;  ///< sets x signs enumerated per m before sampling
  std::size_t samples = 20000;  ///< random sets per m beyond the limit
  std::uint64_t seed = 1;
};

struct DemocracyPoint {
  std::size_t m = 0;
  double sup = 0.0;
  double inf = 0.0;
  double ratio = 1.0;
  IndexSet sup_set;
  SignPattern sup_eps;
  IndexSet inf_set;
  SignPattern inf_eps;
  bool exhaustive = true;
};

/// Per m in [m_lo, m_hi]: extremes of ||1_{eps, A}|| over |A| = m.
std::vector<DemocracyPoint> democracy_functions(const SpaceSpec& space, std::size_t m_lo, std::size_t m_hi,
                                                SignMode mode, const DemocracyConfig& config = {});

}  // namespace tga
