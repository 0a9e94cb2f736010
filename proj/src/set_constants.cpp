#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tga/constants.hpp"
#include "tga/errors.hpp"
#include "tga/search.hpp"

namespace tga {

namespace {

constexpr std::size_t kMaxExactWindow = 14;

std::size_t exact_window(const SpaceSpec& space, std::size_t max_set_size) {
  if (max_set_size == 0) throw InputError("set size must be positive");
  if (max_set_size > kMaxExactWindow)
    throw DomainError("exact sign enumeration supports sets of at most 14 indices");
  return std::min(max_set_size, space.cap());
}

ConstantEstimate set_estimate(ConstantKind kind, std::size_t window, std::size_t instances,
                              std::size_t evaluations) {
  ConstantEstimate e;
  e.kind = kind;
  e.mode = EstimateMode::ExactOverFamily;
  e.budget.family = "subsets of [1, " + std::to_string(window) + "]";
  e.budget.instances = instances;
  e.budget.evaluations = evaluations;
  return e;
}

// Ternary code digits: 0 absent, 1 -> +1, 2 -> -1.
void decode(std::uint32_t code, std::size_t w, std::vector<double>& out) {
  for (std::size_t i = 0; i < w; ++i) {
    const std::uint32_t d = code % 3;
    code /= 3;
    out[i] = d == 0 ? 0.0 : (d == 1 ? 1.0 : -1.0);
  }
}

void code_to_sets(std::uint32_t code, std::size_t w, IndexSet& set, SignPattern& eps) {
  for (std::size_t i = 0; i < w; ++i) {
    const std::uint32_t d = code % 3;
    code /= 3;
    if (d != 0) {
      set.insert(i + 1);
      eps.set(i + 1, d == 1 ? 1 : -1);
    }
  }
}

}  // namespace

ConstantEstimate succ_constant(const SpaceSpec& space, std::size_t max_set_size) {
  const std::size_t w = exact_window(space, max_set_size);
  std::uint32_t total = 1;
  std::vector<std::uint32_t> pow3(w + 1, 1);
  for (std::size_t i = 0; i < w; ++i) {
    total *= 3;
    pow3[i + 1] = total;
  }
  // best[u]: min ||v|| over sign vectors v extending u; arg[u]: the minimizing code.
  std::vector<double> best(total);
  std::vector<std::uint32_t> arg(total);
  std::vector<double> dense(w);
  double value = 1.0;
  std::uint32_t wit_b = 0;
  std::uint32_t wit_a = 0;
  for (std::uint32_t code = total; code-- > 1;) {
    decode(code, w, dense);
    const double own = space.norm_dense(dense);
    best[code] = own;
    arg[code] = code;
    for (std::size_t k = 0; k < w; ++k) {
      if (dense[k] != 0.0) continue;
      for (std::uint32_t d = 1; d <= 2; ++d) {
        const std::uint32_t ext = code + d * pow3[k];
        if (best[ext] < best[code]) {
          best[code] = best[ext];
          arg[code] = arg[ext];
        }
      }
    }
    const double r = own / best[code];
    if (r > value) {
      value = r;
      wit_b = code;
      wit_a = arg[code];
    }
  }
  ConstantEstimate e = set_estimate(ConstantKind::SuppressionUcc, w, total - 1, total - 1);
  if (wit_b == 0) {
    e.witness.set_a = {1};
    e.witness.set_b = {1};
    e.witness.eps = SignPattern{{1, 1}};
  } else {
    IndexSet b;
    SignPattern eps_b;
    code_to_sets(wit_b, w, b, eps_b);
    code_to_sets(wit_a, w, e.witness.set_a, e.witness.eps);
    e.witness.set_b = b;
  }
  e.value = evaluate_witness(space, ConstantKind::SuppressionUcc, e.witness);
  return e;
}

ConstantEstimate ucc_constant(const SpaceSpec& space, std::size_t max_set_size) {
  const std::size_t w = exact_window(space, max_set_size);
  std::vector<double> dense(w, 0.0);
  std::vector<std::size_t> members;
  double value = 1.0;
  std::uint32_t best_set = 1;
  std::uint32_t best_hi = 0;
  std::uint32_t best_lo = 0;
  std::size_t evaluations = 0;
  for (std::uint32_t set = 1; set < (1U << w); ++set) {
    members.clear();
    for (std::size_t i = 0; i < w; ++i) {
      if (set >> i & 1U) members.push_back(i);
    }
    double hi = -1.0;
    double lo = std::numeric_limits<double>::infinity();
    std::uint32_t arg_hi = 0;
    std::uint32_t arg_lo = 0;
    int changes_lo = -1;
    const std::uint32_t patterns = 1U << (members.size() - 1);
    for (std::uint32_t mask = 0; mask < patterns; ++mask) {
      for (std::size_t j = 0; j < members.size(); ++j) dense[members[j]] = j > 0 && (mask >> (j - 1) & 1U) ? -1.0 : 1.0;
      const double n = space.norm_dense(dense);
      ++evaluations;
      if (n > hi) {
        hi = n;
        arg_hi = mask;
      }
      // ties go to the pattern with the most sign changes
      const std::uint32_t low = (1U << (members.size() - 1)) - 1U;
      const int changes = std::popcount((mask ^ (mask << 1U)) & low);
      if (n < lo || (n == lo && changes > changes_lo)) {
        lo = n;
        arg_lo = mask;
        changes_lo = changes;
      }
    }
    for (std::size_t m : members) dense[m] = 0.0;
    if (hi / lo > value) {
      value = hi / lo;
      best_set = set;
      best_hi = arg_hi;
      best_lo = arg_lo;
    }
  }
  ConstantEstimate e = set_estimate(ConstantKind::Ucc, w, (1U << w) - 1, evaluations);
  std::size_t j = 0;
  for (std::size_t i = 0; i < w; ++i) {
    if (!(best_set >> i & 1U)) continue;
    e.witness.set_a.insert(i + 1);
    e.witness.eps.set(i + 1, j > 0 && (best_hi >> (j - 1) & 1U) ? -1 : 1);
    e.witness.eps2.set(i + 1, j > 0 && (best_lo >> (j - 1) & 1U) ? -1 : 1);
    ++j;
  }
  e.value = evaluate_witness(space, ConstantKind::Ucc, e.witness);
  return e;
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

struct DemocracyScan {
  const SpaceSpec& space;
  std::size_t window;
  SignMode mode;
  DemocracyPoint point;
  std::vector<double> dense;

  void visit(const std::vector<std::size_t>& members, std::uint64_t mask) {
    for (std::size_t j = 0; j < members.size(); ++j)
      dense[members[j]] = mode == SignMode::AllSigns && j > 0 && (mask >> (j - 1) & 1U) ? -1.0 : 1.0;
    const double n = space.norm_dense(dense);
    auto record = [&](IndexSet& set, SignPattern& eps) {
      set.clear();
      eps = SignPattern{};
      for (std::size_t m : members) {
        set.insert(m + 1);
        eps.set(m + 1, dense[m] < 0.0 ? -1 : 1);
      }
    };
    if (n > point.sup) {
      point.sup = n;
      record(point.sup_set, point.sup_eps);
    }
    if (n < point.inf) {
      point.inf = n;
      record(point.inf_set, point.inf_eps);
    }
    for (std::size_t m : members) dense[m] = 0.0;
  }

  void all_signs(const std::vector<std::size_t>& members) {
    const std::uint64_t patterns = mode == SignMode::AllSigns ? std::uint64_t{1} << (members.size() - 1) : 1;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) visit(members, mask);
  }
};

}  // namespace

std::vector<DemocracyPoint> democracy_functions(const SpaceSpec& space, std::size_t m_lo, std::size_t m_hi,
                                                SignMode mode, const DemocracyConfig& config) {
  if (m_lo == 0 || m_lo > m_hi) throw InputError("democracy range must satisfy 1 <= m_lo <= m_hi");
  if (m_hi > space.cap()) throw DomainError("democracy range exceeds the dimension cap");
  std::size_t window = config.window == 0 ? std::min<std::size_t>(space.cap(), 16) : config.window;
  window = std::min(std::max(window, m_hi), space.cap());
  if (window > 64) throw DomainError("democracy window larger than 64 indices");

  std::vector<DemocracyPoint> out;
  for (std::size_t m = m_lo; m <= m_hi; ++m) {
    DemocracyScan scan{space, window, mode, {}, std::vector<double>(window, 0.0)};
    scan.point.m = m;
    scan.point.sup = -1.0;
    scan.point.inf = std::numeric_limits<double>::infinity();
    const double signs = mode == SignMode::AllSigns ? std::ldexp(1.0, static_cast<int>(m) - 1) : 1.0;
    const double count = binomial(window, m) * signs;
    std::vector<std::size_t> members;
    if (count <= static_cast<double>(config.exhaustive_limit)) {
      // lexicographic m-subsets of [0, window)
      std::vector<std::size_t> c(m);
      for (std::size_t i = 0; i < m; ++i) c[i] = i;
      while (true) {
        scan.all_signs(c);
        std::size_t i = m;
        while (i > 0 && c[i - 1] == window - m + i - 1) --i;
        if (i == 0) break;
        ++c[i - 1];
        for (std::size_t j = i; j < m; ++j) c[j] = c[j - 1] + 1;
      }
    } else {
      scan.point.exhaustive = false;
      for (std::size_t k = 0; k < config.samples; ++k) {
        Rng rng(derive_seed(config.seed, 0xDE30 + m, k));
        members.clear();
        std::vector<char> taken(window, 0);
        for (std::size_t j = window - m; j < window; ++j) {
          std::size_t t = rng.below(j + 1);
          if (taken[t]) t = j;
          taken[t] = 1;
        }
        for (std::size_t i = 0; i < window; ++i) {
          if (taken[i]) members.push_back(i);
        }
        const std::uint64_t mask = mode == SignMode::AllSigns ? rng.next() : 0;
        scan.visit(members, m > 1 ? mask & ((std::uint64_t{1} << std::min<std::size_t>(m - 1, 63)) - 1) : 0);
      }
    }
    scan.point.ratio = scan.point.sup / scan.point.inf;
    out.push_back(scan.point);
  }
  return out;
}

}  // namespace tga
