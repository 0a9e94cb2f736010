#pragma once
// Brute-force reference computations, written independently of the library code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "tga/coef_vector.hpp"

namespace oracle {

using tga::CoefVector;
using tga::Index;

inline std::vector<double> dense(const CoefVector& x, std::size_t d) {
  std::vector<double> out(d, 0.0);
  for (const auto& [n, v] : x.entries()) out.at(n - 1) = v;
  return out;
}

inline double lp(const std::vector<double>& a, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
  }
  long double s = 0.0L;
  for (double v : a) s += std::pow(static_cast<long double>(std::fabs(v)), static_cast<long double>(p));
  return static_cast<double>(std::pow(s, 1.0L / p));
}

// c0 norm of sum a_n s_n where s_n = e_1 + ... + e_n: the c0 vector has coordinate k equal
// to sum_{n >= k} a_n.
inline double summing(const std::vector<double>& a) {
  double best = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    long double c = 0.0L;
    for (std::size_t n = k; n < a.size(); ++n) c += a[n];
    best = std::max(best, static_cast<double>(std::fabs(c)));
  }
  return best;
}

inline double lorentz(std::vector<double> a, const std::function<double(std::size_t)>& w) {
  for (double& v : a) v = std::fabs(v);
  std::sort(a.begin(), a.end());
  std::reverse(a.begin(), a.end());
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * w(i + 1);
  return static_cast<double>(s);
}

inline double weighted(const std::vector<double>& a, const std::function<double(std::size_t)>& w) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i]) * w(i + 1);
  return static_cast<double>(s);
}

// sup |a_n| over the summing-basis unit ball, by enumerating the vertices T in {-1, 1}^d of
// the tail-sum cube (a_n = T_n - T_{n+1}, T_{d+1} = 0).
inline double summing_dual_by_vertices(std::size_t d, std::size_t n) {
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1U << d); ++mask) {
    auto t = [&](std::size_t k) -> double {
      if (k > d) return 0.0;
      return (mask >> (k - 1)) & 1U ? 1.0 : -1.0;
    };
    best = std::max(best, std::fabs(t(n) - t(n + 1)));
  }
  return best;
}

// All permutations of supp(x) with non-increasing moduli, as index sequences.
inline std::vector<std::vector<Index>> greedy_permutations(const CoefVector& x) {
  std::vector<Index> idx;
  for (const auto& [n, v] : x.entries()) idx.push_back(n);
  std::vector<std::vector<Index>> out;
  do {
    bool ok = true;
    for (std::size_t j = 1; j < idx.size(); ++j) ok = ok && std::fabs(x[idx[j - 1]]) >= std::fabs(x[idx[j]]);
    if (ok) out.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

// Cesaro sum as the mean of the greedy sums G_1..G_n.
inline CoefVector cesaro_as_mean(const CoefVector& x, const std::vector<Index>& order, std::size_t n) {
  std::map<Index, long double> acc;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t j = 0; j < k; ++j) acc[order[j]] += x[order[j]];
  }
  CoefVector out;
  for (const auto& [i, v] : acc) out.set(i, static_cast<double>(v / n));
  return out;
}

inline long double factorial(int n) { return n <= 1 ? 1.0L : n * factorial(n - 1); }

}  // namespace oracle

namespace gen {

// Hand-rolled generators for property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }
  int sign() { return integer(0, 1) ? 1 : -1; }

  // Random vector on [1, d] with support size in [1, smax]; `ties` draws magnitudes from a
  // small set so that tie blocks appear.
  tga::CoefVector vec(std::size_t d, std::size_t smax, bool ties = false) {
    tga::CoefVector x;
    const std::size_t s = integer(1, std::min(d, smax));
    std::vector<tga::Index> pos(d);
    std::iota(pos.begin(), pos.end(), 1);
    std::shuffle(pos.begin(), pos.end(), rng);
    for (std::size_t j = 0; j < s; ++j) {
      const double m = ties ? std::ldexp(1.0, -static_cast<int>(integer(0, 2))) : uniform(0.01, 10.0);
      x.set(pos[j], sign() * m);
    }
    return x;
  }
};

}  // namespace gen
