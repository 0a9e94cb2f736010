#include "tga/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tga/errors.hpp"

namespace tga {

namespace {

// Support sorted by decreasing modulus, ties by increasing index.
std::vector<Index> sorted_support(const CoefVector& x) {
  std::vector<Index> idx;
  idx.reserve(x.support_size());
  for (const auto& [n, v] : x) idx.push_back(n);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return std::abs(x[a]) > std::abs(x[b]); });
  return idx;
}

std::vector<Index> padding(const CoefVector& x, std::size_t count) {
  std::vector<Index> pad;
  pad.reserve(count);
  for (Index n = 1; pad.size() < count; ++n) {
    if (!x.contains(n)) pad.push_back(n);
  }
  return pad;
}

void require_length(const CoefVector& x, std::size_t length) {
  if (length < x.support_size())
    throw DomainError("ordering length " + std::to_string(length) + " shorter than the support size " +
                      std::to_string(x.support_size()));
}

}  // namespace

GreedyOrdering::GreedyOrdering(CoefVector x, std::vector<Index> indices)
    : x_(std::move(x)), indices_(std::move(indices)) {
  if (indices_.size() < x_.support_size()) throw DomainError("greedy ordering shorter than the support");
  IndexSet seen;
  double prev = std::numeric_limits<double>::infinity();
  for (Index n : indices_) {
    if (n == 0) throw DomainError("greedy ordering contains index 0");
    if (!seen.insert(n).second) throw DomainError("greedy ordering repeats index " + std::to_string(n));
    const double m = std::abs(x_[n]);
    if (m > prev) throw DomainError("greedy ordering is not non-increasing at index " + std::to_string(n));
    prev = m;
  }
  for (const auto& [n, v] : x_) {
    if (!seen.contains(n)) throw DomainError("greedy ordering misses support index " + std::to_string(n));
  }
}

Index GreedyOrdering::k(std::size_t j) const {
  if (j == 0 || j > indices_.size()) throw DomainError("ordering position " + std::to_string(j) + " out of range");
  return indices_[j - 1];
}

IndexSet GreedyOrdering::prefix(std::size_t m) const {
  if (m > indices_.size()) throw DomainError("prefix longer than the ordering");
  return IndexSet(indices_.begin(), indices_.begin() + static_cast<std::ptrdiff_t>(m));
}

GreedyOrdering lowest_index_ordering(const CoefVector& x, std::size_t length) {
  require_length(x, length);
  std::vector<Index> idx = sorted_support(x);
  const auto pad = padding(x, length - idx.size());
  idx.insert(idx.end(), pad.begin(), pad.end());
  return GreedyOrdering(x, std::move(idx));
}

std::size_t count_greedy_orderings(const CoefVector& x) {
  const auto idx = sorted_support(x);
  std::size_t total = 1;
  std::size_t run = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    run = (i > 0 && std::abs(x[idx[i]]) == std::abs(x[idx[i - 1]])) ? run + 1 : 1;
    if (total > std::numeric_limits<std::size_t>::max() / run) return std::numeric_limits<std::size_t>::max();
    total *= run;
  }
  return total;
}

std::vector<GreedyOrdering> greedy_orderings(const CoefVector& x, std::size_t length, TiePolicy policy,
                                             std::size_t cap) {
  require_length(x, length);
  if (policy == TiePolicy::LowestIndexFirst) return {lowest_index_ordering(x, length)};

  std::vector<Index> base = sorted_support(x);
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end) of each tie block
  for (std::size_t i = 0; i < base.size();) {
    std::size_t j = i + 1;
    while (j < base.size() && std::abs(x[base[j]]) == std::abs(x[base[i]])) ++j;
    if (j - i > 1) blocks.emplace_back(i, j);
    i = j;
  }
  const auto pad = padding(x, length - base.size());

  std::vector<GreedyOrdering> out;
  std::vector<Index> cur = base;
  while (true) {
    if (out.size() == cap)
      throw BudgetError("more than " + std::to_string(cap) + " greedy orderings", out.size());
    std::vector<Index> full = cur;
    full.insert(full.end(), pad.begin(), pad.end());
    out.emplace_back(x, std::move(full));
    // odometer over blocks, last block varies fastest
    std::size_t b = blocks.size();
    while (b > 0) {
      auto [lo, hi] = blocks[b - 1];
      auto first = cur.begin() + static_cast<std::ptrdiff_t>(lo);
      auto last = cur.begin() + static_cast<std::ptrdiff_t>(hi);
      if (std::next_permutation(first, last)) break;
      --b;  // next_permutation wrapped the block back to sorted order
    }
    if (b == 0) break;
  }
  return out;
}

bool is_greedy_set(const CoefVector& x, const IndexSet& a) {
  double inside = std::numeric_limits<double>::infinity();
  for (Index n : a) inside = std::min(inside, std::abs(x[n]));
  double outside = 0.0;
  for (const auto& [n, v] : x) {
    if (!a.contains(n)) outside = std::max(outside, std::abs(v));
  }
  return inside >= outside;
}

CoefVector greedy_sum(const GreedyOrdering& ordering, std::size_t n) {
  if (n > ordering.size()) throw DomainError("greedy sum index beyond the ordering length");
  CoefVector out;
  for (std::size_t j = 1; j <= n; ++j) {
    const Index k = ordering.k(j);
    const double v = ordering.x()[k];
    if (v != 0.0) out.set(k, v);
  }
  return out;
}

CoefVector cesaro_sum(const GreedyOrdering& ordering, std::size_t n) {
  if (n == 0) throw DomainError("Cesaro sum needs n >= 1");
  if (n > ordering.size()) throw DomainError("Cesaro sum index beyond the ordering length");
  CoefVector out;
  for (std::size_t j = 1; j <= n; ++j) {
    const Index k = ordering.k(j);
    const double v = ordering.x()[k];
    if (v != 0.0) out.set(k, cesaro_weight(n, j) * v);
  }
  return out;
}

CoefVector vp_sum(const GreedyOrdering& ordering, std::size_t n) {
  if (n == 0) throw DomainError("de la Vallee-Poussin sum needs n >= 1");
  if (2 * n > ordering.size()) throw DomainError("de la Vallee-Poussin sum needs 2n <= ordering length");
  CoefVector vp = 2.0 * cesaro_sum(ordering, 2 * n) - cesaro_sum(ordering, n);

  CoefVector identity = greedy_sum(ordering, n);
  for (std::size_t j = 1; j <= n; ++j) {
    const Index k = ordering.k(n + j);
    const double v = ordering.x()[k];
    if (v != 0.0) identity.set(k, cesaro_weight(n, j) * v);
  }
  const double scale = std::max(ordering.x().sup_norm(), std::numeric_limits<double>::min());
  if (max_abs_difference(vp, identity) > 1e-12 * scale)
    throw std::logic_error("de la Vallee-Poussin sum disagrees with its tail decomposition");
  return vp;
}

GreedyOrdering shifted_ordering(const GreedyOrdering& ordering, std::size_t m) {
  if (m >= ordering.size()) throw DomainError("shift must be smaller than the ordering length");
  CoefVector residual = ordering.x() - greedy_sum(ordering, m);
  std::vector<Index> rest(ordering.indices().begin() + static_cast<std::ptrdiff_t>(m), ordering.indices().end());
  return GreedyOrdering(std::move(residual), std::move(rest));
}

double osc(const CoefVector& x, const IndexSet& a) {
  if (a.empty()) return 1.0;
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (Index n : a) {
    if (!x.contains(n)) throw DomainError("oscillation set leaves the support at index " + std::to_string(n));
    const double m = std::abs(x[n]);
    hi = std::max(hi, m);
    lo = std::min(lo, m);
  }
  return hi / lo;
}

CoefVector indicator_sum(const SignPattern& eps, const IndexSet& b) {
  CoefVector out;
  for (Index n : b) out.set(n, static_cast<double>(eps[n]));
  return out;
}

IndexSet threshold_set(const CoefVector& x, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("threshold must lie in (0, 1]");
  if (!x.in_q()) throw DomainError("threshold sets are defined for x in Q");
  IndexSet out;
  for (const auto& [n, v] : x) {
    if (std::abs(v) >= t) out.insert(out.end(), n);
  }
  return out;
}

bool dominates(const CoefVector& x, const CoefVector& y) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& [n, v] : x) lo = std::min(lo, std::abs(v));
  return lo >= y.sup_norm();
}

CoefVector projection(const CoefVector& x, const IndexSet& a) {
  CoefVector out;
  for (const auto& [n, v] : x) {
    if (a.contains(n)) out.set(n, v);
  }
  return out;
}

CoefVector complement_projection(const CoefVector& x, const IndexSet& a) {
  CoefVector out;
  for (const auto& [n, v] : x) {
    if (!a.contains(n)) out.set(n, v);
  }
  return out;
}

}  // namespace tga
