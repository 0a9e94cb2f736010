#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tga {

/// An argument lies outside the domain an operation is defined on
/// (index beyond the dimension cap, set not contained in a support, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input: non-finite coefficients, bad config records, bad payloads.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or search exceeded its declared budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, std::size_t partial_count)
      : std::runtime_error(what), partial_count_(partial_count) {}

  /// Number of items produced before the budget was hit.
  std::size_t partial_count() const noexcept { return partial_count_; }

 private:
  std::size_t partial_count_;
};

}  // namespace tga
