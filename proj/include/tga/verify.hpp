#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tga/constants.hpp"
#include "tga/greedy.hpp"
#include "tga/search.hpp"
#include "tga/serialize.hpp"
#include "tga/spaces.hpp"

namespace tga {

enum class CheckStatus {
  ExactPass,  ///< an algebraic identity held at tolerance on every instance
  ConsistentWithinBudget,  ///< no violation of an inequality among the instances tried
  CounterexampleFound,
  PreconditionFailed,  ///< the hypotheses of the checked statement do not hold
  Inconclusive,
};
std::string to_string(CheckStatus status);

struct CheckReport {
  std::string check_name;
  CheckStatus status = CheckStatus::Inconclusive;
  std::size_t instances = 0;
  /// Smallest relative margin (bound - value) / bound seen; for identities, minus the
  /// largest relative discrepancy.
  double worst_slack = 0.0;
  /// Replayable record of the first violating instance.
  std::optional<Json> counterexample;
  std::string note;
  Json details = Json::object();

  /// True for a failed identity or a counterexample.
  bool failed() const;
};

Json to_json(const CheckReport& r);

/// Relative tolerance of the identity checks.
inline constexpr double kIdentityTolerance = 1e-12;

// ---------------------------------------------------------------- identities

/// 2 C_{2n} - C_n = G_n + sum_{j<=n} ((n+1-j)/n) x_{k_{n+j}} e_{k_{n+j}} and
/// 2 C_{2m} - C_m = G_m + C_m^{O_m}(x - G_m), coefficientwise, on `samples` random
/// (x, ordering, n) with random tie breaking. details["worst_instance"] is a replayable
/// record of the largest discrepancy.
CheckReport check_vp_identity(const SpaceSpec& space, std::size_t samples, std::uint64_t seed = 1);
/// Both identities for one vector, every greedy ordering of length `length` and every
/// n with 2n <= length.
CheckReport check_vp_identity(const CoefVector& x, std::size_t length, std::size_t ordering_cap = kDefaultOrderingCap);
/// Both identities for one instance (used by replay).
CheckReport check_vp_identity(const GreedyOrdering& ordering, std::size_t n);

/// Sum over all orderings pi of A of VP_n(1_{eps,A} + x) along an ordering listing A in
/// pi order first, against ((2n-1)! (3n+1) / 2) 1_{eps,A}. A is the domain of eps,
/// |A| = 2n, n <= 3; x in Q with support disjoint from A.
/// Throws BudgetError for n > 3, DomainError for other violated preconditions.
CheckReport check_permutation_average(std::size_t n, const SignPattern& eps, const CoefVector& x = {});
/// (2n-1)! (3n+1) / 2 in integer arithmetic.
std::uint64_t permutation_average_coefficient(std::size_t n);

// ---------------------------------------------------------------- inequality chains

/// qglc <= 4/3 vpqg + alpha1 alpha2 and ucc <= 2 (alpha1 alpha2 + 4/3 vpqg), all three
/// constants exact over the family on the space truncated to the family dimension.
CheckReport check_qglc_bound(const SpaceSpec& space, const ExhaustiveFamily& family, unsigned jobs = 1);

/// qg <= K1 + 2 Psi(1, 1/M) + 4 K2 Psi(1, 1/M) with M = osc_threshold (4 in the classical
/// statement), K1 = vpqg, K2 = superdemocracy constant, over the family. Skipped with
/// PreconditionFailed when the constant-sign democracy constant exceeds democracy_limit.
struct DemocracyCheckConfig {
  double osc_threshold = 4.0;
  double democracy_limit = 4.0;
  unsigned jobs = 1;
};
CheckReport check_dem_implies_qg(const SpaceSpec& space, const ExhaustiveFamily& family,
                                 const DemocracyCheckConfig& config = {});

// ---------------------------------------------------------------- subsequence lemmas

/// Strictly increasing positive terms, optionally with a bounded-gap witness l.
struct GapSequence {
  std::vector<std::size_t> terms;
  std::optional<std::size_t> bounded_gap;

  /// Throws InputError unless the terms increase strictly and respect the witness.
  void validate() const;
  /// n_i = base^i for i = 0, 1, ... while n_i <= limit; witness l = base.
  static GapSequence powers(std::size_t base, std::size_t limit);
};

/// Global constants for the subsequence lemmas: K (the VPQG constant) and the step
/// curve osc -> Psi(1, 1/osc).
struct LemmaConstants {
  double vpqg = 1.0;
  std::vector<std::pair<double, double>> psi_curve;
  bool exact = false;
  std::string source;

  /// Psi(1, 1/m); at least 1.
  double psi(double m) const;
};
/// Exhaustive values over the family on the truncated space.
LemmaConstants lemma_constants(const SpaceSpec& space, const ExhaustiveFamily& family, unsigned jobs = 1);

/// Lemma bound ||G_n(x)|| <= (K + 2 Psi(1, 1/M)) ||x|| for n in
/// E = {n_l + j : 0 <= j <= n_l}, M the largest oscillation over the windows
/// {k_{n_l+1}, ..., k_{2 n_l}}. K and Psi are the larger of the global values and the
/// ones realized by this instance, so a violation is a genuine counterexample.
/// Throws DomainError if a window leaves the support of x.
CheckReport check_gap_window(const SpaceSpec& space, const GreedyOrdering& ordering, const GapSequence& gaps,
                             const LemmaConstants& constants);

/// Some 0 <= i <= log2(n) + 3 has ||G_{2^i n}(x)|| <= (alpha1 alpha2 + K + 2 Psi(1, 1/4)) ||x||.
/// Needs an ordering of length >= 2^(floor(log2 n) + 3) n (DomainError otherwise).
CheckReport check_log_window(const SpaceSpec& space, const GreedyOrdering& ordering, std::size_t n,
                             const LemmaConstants& constants);

enum class DecayVariant { ConsecutiveWindows, DoubledWindows };

/// Window l1-mass decay: with windows W_i = {k_{n_i+1}, ..., k_{n_{i+1}}} of oscillation
/// >= l + eps from some i0 on (DoubledWindows: {k_{n_i+1}, ..., k_{2 n_i}} with >= 2l + eps,
/// reduced to the first case on a subsequence with 2l-bounded gaps), the mass of window
/// i + 1 is at most (l / (l + eps))^i |x_{k_{n_1+1}}| n_2. Reports the fitted decay ratio.
CheckReport check_ell1_decay(const GreedyOrdering& ordering, const GapSequence& gaps, double l, double eps,
                             DecayVariant variant);

struct ResidualRow {
  std::size_t n = 0;
  double greedy = 0.0;  ///< ||x - G_n||
  double cesaro = 0.0;  ///< ||x - C_n||
  double vp = 0.0;  ///< ||x - VP_n||
};

struct SubsequenceResult {
  std::vector<std::size_t> d;  ///< selected terms
  std::vector<std::size_t> selected_indices;  ///< positions i of the selected n_i
  std::vector<double> residuals;  ///< ||x - G_{d_k}||
  bool ell1_fallback = false;
  std::vector<ResidualRow> curve;  ///< n = 1..ordering length
  /// Per tolerance: first k with residuals below it from k on, if reached.
  std::vector<std::pair<double, std::optional<std::size_t>>> tolerance_hits;
  CheckReport report;
};

/// Selects d = (n_i)_{i in D}, D = {i : osc(window i) <= 2l + eps}, among terms whose
/// window {k_{n_i+1}, ..., k_{2 n_i}} lies within the ordering. Windows with zero
/// coefficients count as unbounded unless entirely zero. An empty D switches to the
/// whole sequence (the l1 route).
SubsequenceResult find_convergent_subsequence(const SpaceSpec& space, const GreedyOrdering& ordering,
                                              const GapSequence& gaps, const std::vector<double>& tolerances,
                                              double eps = 0.5,
                                              const std::optional<LemmaConstants>& constants = std::nullopt);

/// Search for A > m1 with |A| = m2 and ||1_{eps,A}|| <= M for every sign choice
/// (exhaustive in signs for m2 <= 14). Found: ConsistentWithinBudget with the witness;
/// none found: PreconditionFailed.
CheckReport check_spreading_condition(const SpaceSpec& space, double M, std::size_t m1, std::size_t m2,
                                      std::size_t candidate_sets = 256, std::uint64_t seed = 1);

// ---------------------------------------------------------------- classification

enum class Verdict { LikelyHolds, FailsWithWitness, Inconclusive };
std::string to_string(Verdict v);

struct PropertyVerdict {
  std::string property;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::pair<std::size_t, double>> trace;  ///< (dimension, estimate)
  double bound = 0.0;  ///< largest estimate
  std::optional<ConstantEstimate> witness;
  std::string implied_by;  ///< set when the verdict follows from another property
};

struct ClassifyConfig {
  std::vector<std::size_t> dimensions{4, 6, 8};
  std::vector<double> levels{1.0, 0.5};
  /// Last/first estimate ratio counted as divergence.
  double growth_ratio = 1.5;
  unsigned jobs = 1;
};

struct ClassificationReport {
  std::string space;
  std::vector<PropertyVerdict> properties;
  /// Almost greedy | CQG + democratic | VPQG + democratic, at the largest dimension.
  Json panel = Json::object();

  const PropertyVerdict& at(const std::string& property) const;
};

ClassificationReport classify_basis(const SpaceSpec& space, const ClassifyConfig& config = {});
Json to_json(const ClassificationReport& r);

}  // namespace tga
