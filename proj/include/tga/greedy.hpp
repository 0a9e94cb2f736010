#pragma once

#include <cstddef>
#include <vector>

#include "tga/coef_vector.hpp"

namespace tga {

enum class TiePolicy { LowestIndexFirst, Enumerate };

/// A finite greedy ordering (k_1, ..., k_L) for x: distinct indices, non-increasing
/// |x_{k_j}|, every support index listed (so zero coefficients come last).
class GreedyOrdering {
 public:
  /// Throws DomainError when the sequence is not a greedy ordering for x.
  GreedyOrdering(CoefVector x, std::vector<Index> indices);

  const CoefVector& x() const noexcept { return x_; }
  const std::vector<Index>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  /// k_j for 1 <= j <= size().
  Index k(std::size_t j) const;
  /// {k_1, ..., k_m}.
  IndexSet prefix(std::size_t m) const;

  friend bool operator==(const GreedyOrdering&, const GreedyOrdering&) = default;

 private:
  CoefVector x_;
  std::vector<Index> indices_;
};

inline constexpr std::size_t kDefaultOrderingCap = 10000;

/// LowestIndexFirst: the unique ordering breaking ties by smaller index.
/// Enumerate: every ordering of the tied support blocks, in lexicographic order.
/// Zero-coefficient positions are filled with the lowest unused indices.
/// Enumerate throws BudgetError once more than `cap` orderings exist.
std::vector<GreedyOrdering> greedy_orderings(const CoefVector& x, std::size_t length,
                                             TiePolicy policy,
                                             std::size_t cap = kDefaultOrderingCap);
GreedyOrdering lowest_index_ordering(const CoefVector& x, std::size_t length);
/// Number of greedy orderings of supp(x) (product of factorials of tie blocks), saturating.
std::size_t count_greedy_orderings(const CoefVector& x);

/// A in G(x, |A|): min over A of |x_n| >= max outside A.
bool is_greedy_set(const CoefVector& x, const IndexSet& a);

/// Cesaro weight (n + 1 - j) / n.
inline double cesaro_weight(std::size_t n, std::size_t j) {
  return static_cast<double>(n + 1 - j) / static_cast<double>(n);
}

/// G_n = sum_{j<=n} x_{k_j} e_{k_j}.
CoefVector greedy_sum(const GreedyOrdering& ordering, std::size_t n);
/// C_n = sum_{j<=n} ((n + 1 - j) / n) x_{k_j} e_{k_j}; n >= 1.
CoefVector cesaro_sum(const GreedyOrdering& ordering, std::size_t n);
/// 2 C_{2n} - C_n. Checked internally against G_n + sum_{j<=n} ((n+1-j)/n) x_{k_{n+j}} e_{k_{n+j}}.
CoefVector vp_sum(const GreedyOrdering& ordering, std::size_t n);
/// (k_{j+m})_j as an ordering for x - G_m(x).
GreedyOrdering shifted_ordering(const GreedyOrdering& ordering, std::size_t m);

/// max_A |x_n| / min_A |x_n|, with osc(x, {}) = 1.
double osc(const CoefVector& x, const IndexSet& a);
/// sum_{n in B} eps_n e_n.
CoefVector indicator_sum(const SignPattern& eps, const IndexSet& b);
/// A(x, t) = {n : |x_n| >= t} for x in Q and 0 < t <= 1.
IndexSet threshold_set(const CoefVector& x, double t);
/// x |> y: min over supp(x) of |x_n| >= max_n |y_n|.
bool dominates(const CoefVector& x, const CoefVector& y);
/// P_A(x).
CoefVector projection(const CoefVector& x, const IndexSet& a);
/// x - P_A(x).
CoefVector complement_projection(const CoefVector& x, const IndexSet& a);

}  // namespace tga
