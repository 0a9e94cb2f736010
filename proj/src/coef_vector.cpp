#include "tga/coef_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tga/errors.hpp"

namespace tga {

namespace {

void check_index(Index n) {
  if (n == 0) throw DomainError("basis indices are 1-based; got index 0");
}

void check_finite(Index n, double value) {
  if (!std::isfinite(value))
    throw InputError("non-finite coefficient at index " + std::to_string(n));
}

}  // namespace

CoefVector::CoefVector(std::initializer_list<std::pair<const Index, double>> entries) {
  for (const auto& [n, v] : entries) set(n, v);
}

CoefVector CoefVector::from_dense(std::span<const double> dense) {
  CoefVector x;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) x.set(i + 1, dense[i]);
  }
  return x;
}

double CoefVector::operator[](Index n) const {
  auto it = entries_.find(n);
  return it == entries_.end() ? 0.0 : it->second;
}

void CoefVector::set(Index n, double value) {
  check_index(n);
  check_finite(n, value);
  if (value == 0.0) {
    entries_.erase(n);
  } else {
    entries_[n] = value;
  }
}

void CoefVector::add(Index n, double value) { set(n, (*this)[n] + value); }

IndexSet CoefVector::support() const {
  IndexSet s;
  for (const auto& [n, v] : entries_) s.insert(s.end(), n);
  return s;
}

Index CoefVector::max_index() const noexcept {
  return entries_.empty() ? 0 : entries_.rbegin()->first;
}

double CoefVector::sup_norm() const noexcept {
  double m = 0.0;
  for (const auto& [n, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool CoefVector::in_q() const noexcept { return sup_norm() <= 1.0; }

bool CoefVector::in_q0() const {
  if (!in_q()) return false;
  std::vector<double> mods;
  mods.reserve(entries_.size());
  for (const auto& [n, v] : entries_) mods.push_back(std::abs(v));
  std::sort(mods.begin(), mods.end());
  return std::adjacent_find(mods.begin(), mods.end()) == mods.end();
}

std::vector<double> CoefVector::to_dense(std::size_t length) const {
  if (max_index() > length)
    throw DomainError("support index " + std::to_string(max_index()) +
                      " exceeds dense length " + std::to_string(length));
  std::vector<double> dense(length, 0.0);
  for (const auto& [n, v] : entries_) dense[n - 1] = v;
  return dense;
}

CoefVector& CoefVector::operator+=(const CoefVector& other) {
  for (const auto& [n, v] : other.entries_) add(n, v);
  return *this;
}

CoefVector& CoefVector::operator-=(const CoefVector& other) {
  for (const auto& [n, v] : other.entries_) add(n, -v);
  return *this;
}

CoefVector& CoefVector::operator*=(double scalar) {
  if (!std::isfinite(scalar)) throw InputError("non-finite scalar");
  if (scalar == 0.0) {
    entries_.clear();
    return *this;
  }
  for (auto& [n, v] : entries_) v *= scalar;
  // Underflow can zero a coefficient.
  std::erase_if(entries_, [](const auto& kv) { return kv.second == 0.0; });
  return *this;
}

double max_abs_difference(const CoefVector& a, const CoefVector& b) {
  double m = 0.0;
  for (const auto& [n, v] : a) m = std::max(m, std::abs(v - b[n]));
  for (const auto& [n, v] : b) {
    if (!a.contains(n)) m = std::max(m, std::abs(v));
  }
  return m;
}

SignPattern::SignPattern(std::initializer_list<std::pair<const Index, int>> signs) {
  for (const auto& [n, s] : signs) set(n, s);
}

SignPattern SignPattern::constant(const IndexSet& domain, int sign) {
  SignPattern eps;
  for (Index n : domain) eps.set(n, sign);
  return eps;
}

SignPattern SignPattern::of(const CoefVector& x, const IndexSet& domain) {
  SignPattern eps;
  for (Index n : domain) eps.set(n, x[n] < 0.0 ? -1 : 1);
  return eps;
}

int SignPattern::operator[](Index n) const {
  auto it = signs_.find(n);
  if (it == signs_.end())
    throw DomainError("index " + std::to_string(n) + " outside the sign pattern domain");
  return it->second;
}

void SignPattern::set(Index n, int sign) {
  check_index(n);
  if (sign != 1 && sign != -1) throw InputError("signs must be +1 or -1");
  signs_[n] = sign;
}

IndexSet SignPattern::domain() const {
  IndexSet s;
  for (const auto& [n, v] : signs_) s.insert(s.end(), n);
  return s;
}

}  // namespace tga
