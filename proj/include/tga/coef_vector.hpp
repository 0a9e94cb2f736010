#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace tga {

/// Basis index. Indices are 1-based, as in x = sum_n x_n^*(x) x_n.
using Index = std::size_t;
using IndexSet = std::set<Index>;

/// A finitely supported element x, stored through its dual coefficients
/// x_n^*(x). Only nonzero finite coefficients are stored, so the key set is
/// exactly supp(x).
class CoefVector {
 public:
  using Entries = std::map<Index, double>;
  using const_iterator = Entries::const_iterator;

  CoefVector() = default;
  CoefVector(std::initializer_list<std::pair<const Index, double>> entries);

  /// dense[i] is the coefficient of basis index i + 1.
  static CoefVector from_dense(std::span<const double> dense);

  double operator[](Index n) const;
  /// Setting a zero coefficient removes n from the support.
  void set(Index n, double value);
  void add(Index n, double value);

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t support_size() const noexcept { return entries_.size(); }
  IndexSet support() const;
  bool contains(Index n) const { return entries_.contains(n); }
  /// Largest index in the support, 0 for the zero vector.
  Index max_index() const noexcept;

  /// ||x||_{l_infty} of the coefficient sequence.
  double sup_norm() const noexcept;
  /// Membership in Q: every |coefficient| <= 1.
  bool in_q() const noexcept;
  /// Membership in Q_0: in Q and pairwise distinct moduli on the support.
  bool in_q0() const;

  /// Dense coefficients for indices 1..length; entries beyond length must be absent.
  std::vector<double> to_dense(std::size_t length) const;

  const Entries& entries() const noexcept { return entries_; }
  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }

  CoefVector& operator+=(const CoefVector& other);
  CoefVector& operator-=(const CoefVector& other);
  CoefVector& operator*=(double scalar);

  friend CoefVector operator+(CoefVector a, const CoefVector& b) { return a += b; }
  friend CoefVector operator-(CoefVector a, const CoefVector& b) { return a -= b; }
  friend CoefVector operator*(double s, CoefVector a) { return a *= s; }
  friend bool operator==(const CoefVector&, const CoefVector&) = default;

 private:
  Entries entries_;
};

/// Largest coefficient discrepancy max_n |a_n - b_n|.
double max_abs_difference(const CoefVector& a, const CoefVector& b);

/// A sign pattern eps in E^A for real scalars: a map A -> {-1, +1}.
class SignPattern {
 public:
  SignPattern() = default;
  SignPattern(std::initializer_list<std::pair<const Index, int>> signs);

  static SignPattern constant(const IndexSet& domain, int sign = 1);
  /// eps(x) restricted to the domain, with sgn(0) = 1.
  static SignPattern of(const CoefVector& x, const IndexSet& domain);

  /// Throws DomainError when n is outside the domain.
  int operator[](Index n) const;
  void set(Index n, int sign);
  bool contains(Index n) const { return signs_.contains(n); }
  std::size_t size() const noexcept { return signs_.size(); }
  IndexSet domain() const;
  const std::map<Index, int>& signs() const noexcept { return signs_; }

  friend bool operator==(const SignPattern&, const SignPattern&) = default;

 private:
  std::map<Index, int> signs_;
};

}  // namespace tga
