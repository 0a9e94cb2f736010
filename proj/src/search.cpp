#include "tga/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tga/errors.hpp"
#include "tga/format.hpp"

namespace tga {

Profile Profile::parse(const std::string& tag) {
  if (tag == "harmonic") return {Kind::Harmonic, 0.0};
  if (tag == "flat") return {Kind::FlatWithTies, 0.0};
  if (tag == "two_block") return {Kind::TwoBlock, 0.0};
  const std::string head = "geometric(";
  if (tag.size() > head.size() + 1 && tag.compare(0, head.size(), head) == 0 && tag.back() == ')') {
    const std::string body = tag.substr(head.size(), tag.size() - head.size() - 1);
    std::size_t used = 0;
    double r = 0.0;
    try {
      r = std::stod(body, &used);
    } catch (const std::exception&) {
      throw InputError("bad profile tag '" + tag + "'");
    }
    if (used != body.size() || !(r > 0.0 && r < 1.0)) throw InputError("bad profile tag '" + tag + "'");
    return {Kind::Geometric, r};
  }
  throw InputError("unknown profile tag '" + tag + "'");
}

std::string Profile::tag() const {
  switch (kind) {
    case Kind::Geometric:
      return "geometric(" + format_number(r) + ")";
    case Kind::Harmonic:
      return "harmonic";
    case Kind::FlatWithTies:
      return "flat";
    case Kind::TwoBlock:
      return "two_block";
  }
  return "";
}

std::vector<Profile> default_profiles() {
  return {{Profile::Kind::Geometric, 0.5},  {Profile::Kind::Geometric, 0.9},
          {Profile::Kind::Geometric, 0.99}, {Profile::Kind::Harmonic, 0.0},
          {Profile::Kind::FlatWithTies, 0.0}, {Profile::Kind::TwoBlock, 0.0}};
}

std::string ExhaustiveFamily::describe() const {
  std::string s = "F(" + std::to_string(dimension) + ", {";
  for (std::size_t i = 0; i < levels.size(); ++i) s += (i ? ", " : "") + format_number(levels[i]);
  return s + "})";
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ stream) ^ index);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(next()) * n;
  return static_cast<std::size_t>(wide >> 64);
}

std::vector<double> profile_magnitudes(const Profile& profile, std::size_t s, Rng& rng) {
  std::vector<double> mags(s, 1.0);
  switch (profile.kind) {
    case Profile::Kind::Geometric:
      for (std::size_t j = 1; j < s; ++j) mags[j] = mags[j - 1] * profile.r;
      break;
    case Profile::Kind::Harmonic:
      for (std::size_t j = 0; j < s; ++j) mags[j] = 1.0 / static_cast<double>(j + 1);
      break;
    case Profile::Kind::FlatWithTies: {
      const std::size_t groups = 1 + rng.below(3);
      for (std::size_t j = 1; j < s; ++j) mags[j] = std::ldexp(1.0, -static_cast<int>(rng.below(groups)));
      break;
    }
    case Profile::Kind::TwoBlock: {
      const std::size_t head = s > 1 ? 1 + rng.below(s - 1) : 1;
      const double low = std::exp2(-(1.0 + 5.0 * rng.uniform01()));
      for (std::size_t j = head; j < s; ++j) mags[j] = low;
      break;
    }
  }
  return mags;
}

std::vector<double> sample_dense(const SearchConfig& config, std::size_t dimension, std::size_t i) {
  if (config.profiles.empty()) throw InputError("search config lists no coefficient profiles");
  if (dimension == 0) throw InputError("sampling dimension must be positive");
  Rng rng(derive_seed(config.seed, 0x5A3B1E, i));
  const std::size_t hi = std::min(config.max_support, dimension);
  const std::size_t lo = std::min(std::max<std::size_t>(config.min_support, 1), hi);
  const std::size_t s = lo + rng.below(hi - lo + 1);
  const Profile& profile = config.profiles[rng.below(config.profiles.size())];
  std::vector<double> mags = profile_magnitudes(profile, s, rng);

  // random s-subset of positions (Floyd), then a random assignment of magnitudes
  std::vector<std::size_t> pos;
  std::vector<char> taken(dimension, 0);
  for (std::size_t j = dimension - s; j < dimension; ++j) {
    std::size_t t = rng.below(j + 1);
    if (taken[t]) t = j;
    taken[t] = 1;
    pos.push_back(t);
  }
  for (std::size_t j = pos.size(); j > 1; --j) std::swap(pos[j - 1], pos[rng.below(j)]);

  std::vector<double> dense(dimension, 0.0);
  for (std::size_t j = 0; j < s; ++j) dense[pos[j]] = rng.sign() * mags[j];
  return dense;
}

CoefVector sample_vector(const SearchConfig& config, std::size_t dimension, std::size_t i) {
  const auto dense = sample_dense(config, dimension, i);
  return CoefVector::from_dense(dense);
}

void validate(const ExhaustiveFamily& family) {
  if (family.dimension == 0 || family.dimension > 16) throw InputError("family dimension must lie in [1, 16]");
  if (family.levels.empty()) throw InputError("family needs at least one level");
  for (std::size_t i = 0; i < family.levels.size(); ++i) {
    const double v = family.levels[i];
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("family levels must be positive");
    if (i > 0 && !(v < family.levels[i - 1])) throw InputError("family levels must be strictly decreasing");
  }
  const double codes = std::pow(2.0 * static_cast<double>(family.levels.size()) + 1.0,
                                static_cast<double>(family.dimension));
  if (codes > 1e9) throw BudgetError("family has more than 1e9 codes", 0);
}

std::uint64_t family_code_count(const ExhaustiveFamily& family) {
  validate(family);
  const std::uint64_t base = 2 * family.levels.size() + 1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < family.dimension; ++i) total *= base;
  return total;
}

bool family_vector(const ExhaustiveFamily& family, std::uint64_t code, std::vector<double>& out) {
  const std::uint64_t levels = family.levels.size();
  const std::uint64_t base = 2 * levels + 1;
  out.assign(family.dimension, 0.0);
  bool first_seen = false;
  bool top = false;
  for (std::size_t i = 0; i < family.dimension; ++i) {
    const std::uint64_t digit = code % base;
    code /= base;
    if (digit == 0) continue;
    const bool negative = digit > levels;
    const std::size_t li = static_cast<std::size_t>(negative ? digit - levels - 1 : digit - 1);
    if (!first_seen) {
      if (negative) return false;
      first_seen = true;
    }
    top = top || li == 0;
    out[i] = negative ? -family.levels[li] : family.levels[li];
  }
  return top;
}

std::vector<CoefVector> family_members(const ExhaustiveFamily& family) {
  std::vector<CoefVector> out;
  std::vector<double> dense;
  const std::uint64_t total = family_code_count(family);
  for (std::uint64_t c = 0; c < total; ++c) {
    if (family_vector(family, c, dense)) out.push_back(CoefVector::from_dense(dense));
  }
  return out;
}

}  // namespace tga
