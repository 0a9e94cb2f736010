#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "tga/coef_vector.hpp"

namespace tga {

/// Coefficient-magnitude profile used by the random sampler.
struct Profile {
  enum class Kind { Geometric, Harmonic, FlatWithTies, TwoBlock };
  Kind kind = Kind::Harmonic;
  double r = 0.5;  ///< ratio for Geometric

  /// "geometric(r)", "harmonic", "flat", "two_block".
  static Profile parse(const std::string& tag);
  std::string tag() const;
  friend bool operator==(const Profile&, const Profile&) = default;
};

/// geometric 0.5 / 0.9 / 0.99, harmonic, flat with ties, two-block.
std::vector<Profile> default_profiles();

/// Finite family F(d, levels): every vector on [1, d] with coefficients in
/// {0} U {+-level}, reduced modulo sign and scale (first nonzero coefficient positive,
/// largest level present).
struct ExhaustiveFamily {
  std::size_t dimension = 6;
  std::vector<double> levels{1.0, 0.5};
  /// Greedy orderings enumerated per vector before the vector is marked truncated.
  std::size_t ordering_cap = 50000;

  std::string describe() const;
};

struct SearchConfig {
  std::uint64_t seed = 1;
  std::size_t samples = 2000;
  std::size_t min_support = 1;
  std::size_t max_support = 12;
  /// Random supports are placed in [1, dimension] (clamped to the space cap).
  std::size_t dimension = 32;
  std::vector<Profile> profiles = default_profiles();
  /// Greedy orderings enumerated per sampled vector.
  std::size_t ordering_cap = 10000;
  /// Largest support (or tie block) for which subsets and sign patterns are enumerated.
  std::size_t subset_bits = 12;
  /// When set, the search runs over this family instead of random samples.
  std::optional<ExhaustiveFamily> exhaustive;
  unsigned jobs = 1;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
/// Independent stream seed for (seed, stream, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// mt19937_64 with implementation-independent mappings to doubles and integers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [0, n); n > 0.
  std::size_t below(std::size_t n);
  int sign() { return (next() >> 63) != 0U ? -1 : 1; }

 private:
  std::mt19937_64 engine_;
};

/// Dense magnitudes for a support of size s under a profile (largest magnitude 1).
std::vector<double> profile_magnitudes(const Profile& profile, std::size_t s, Rng& rng);

/// The i-th random sample of a search: depends only on (config, i), so larger sample
/// counts extend smaller ones. Returned dense over [1, dimension].
std::vector<double> sample_dense(const SearchConfig& config, std::size_t dimension, std::size_t i);
CoefVector sample_vector(const SearchConfig& config, std::size_t dimension, std::size_t i);

/// Number of codes (2 |levels| + 1)^d scanned by the family enumeration.
std::uint64_t family_code_count(const ExhaustiveFamily& family);
/// Decodes a family code; returns false for non-canonical codes.
bool family_vector(const ExhaustiveFamily& family, std::uint64_t code, std::vector<double>& out);
/// All canonical vectors, in code order.
std::vector<CoefVector> family_members(const ExhaustiveFamily& family);
void validate(const ExhaustiveFamily& family);

/// Splits [0, count) into `jobs` contiguous chunks and runs fn(begin, end) on each,
/// returning the per-chunk results in chunk order.
template <class Fn>
auto run_chunks(std::size_t count, unsigned jobs, Fn&& fn) {
  using Result = decltype(fn(std::size_t{0}, std::size_t{0}));
  const std::size_t parts = std::max<std::size_t>(1, std::min<std::size_t>(jobs == 0 ? 1 : jobs, count == 0 ? 1 : count));
  std::vector<Result> out(parts);
  if (parts == 1) {
    out[0] = fn(std::size_t{0}, count);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(parts);
  for (std::size_t c = 0; c < parts; ++c) {
    const std::size_t begin = c * count / parts;
    const std::size_t end = (c + 1) * count / parts;
    pool.emplace_back([&, c, begin, end] { out[c] = fn(begin, end); });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace tga
