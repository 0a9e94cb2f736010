#include "tga/constants.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>

#include "tga/errors.hpp"
#include "tga/greedy.hpp"

namespace tga {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Sign-pattern evaluations spent on the Psi search for one vector before falling back to
// the all-plus pattern.
constexpr std::size_t kPsiSignBudget = std::size_t{1} << 18;

struct Best {
  double value = -1.0;
  Witness witness;
};

template <class Make>
void offer(Best& b, double v, Make&& make) {
  if (v > b.value) {
    b.value = v;
    b.witness = make();
  }
}

void take_better(Best& into, Best& from) {
  if (from.value > into.value) into = std::move(from);
}

struct Request {
  bool qg = false, sqg = false, cqg = false, vpqg = false, qglc = false, tqg = false, almost = false;
  bool phi = false, theta = false, phi_u = false;
  std::vector<double> t_grid;
  bool psi = false;
  std::vector<double> psi_t, psi_s;
  double curve_t = 1.0;
  std::size_t ordering_cap = 10000;
  std::size_t subset_bits = 12;
};

struct Counters {
  std::size_t instances = 0;
  std::size_t evaluations = 0;
  std::size_t trunc_orderings = 0;
  std::size_t trunc_subsets = 0;
  std::size_t trunc_signs = 0;
  std::size_t trunc_psi = 0;
  std::size_t skipped = 0;

  void add(const Counters& o) {
    instances += o.instances;
    evaluations += o.evaluations;
    trunc_orderings += o.trunc_orderings;
    trunc_subsets += o.trunc_subsets;
    trunc_signs += o.trunc_signs;
    trunc_psi += o.trunc_psi;
    skipped += o.skipped;
  }
};

struct Result {
  Best qg, sqg, cqg, vpqg, qglc, tqg, almost;
  std::vector<Best> phi, theta, phi_u, psi;
  std::map<double, double> curve;
  Counters c;

  void size_for(const Request& req) {
    phi.resize(req.t_grid.size());
    theta.resize(req.t_grid.size());
    phi_u.resize(req.t_grid.size());
    psi.resize(req.psi_t.size() * req.psi_s.size());
  }

  void merge(Result& o) {
    const std::array<std::pair<Best*, Best*>, 7> scalars{{{&qg, &o.qg},
                                                          {&sqg, &o.sqg},
                                                          {&cqg, &o.cqg},
                                                          {&vpqg, &o.vpqg},
                                                          {&qglc, &o.qglc},
                                                          {&tqg, &o.tqg},
                                                          {&almost, &o.almost}}};
    for (auto [a, b] : scalars) take_better(*a, *b);
    const std::array<std::pair<std::vector<Best>*, std::vector<Best>*>, 4> grids{
        {{&phi, &o.phi}, {&theta, &o.theta}, {&phi_u, &o.phi_u}, {&psi, &o.psi}}};
    for (auto [a, b] : grids) {
      for (std::size_t i = 0; i < a->size(); ++i) take_better((*a)[i], (*b)[i]);
    }
    for (const auto& [k, v] : o.curve) {
      auto [it, fresh] = curve.emplace(k, v);
      if (!fresh) it->second = std::max(it->second, v);
    }
    c.add(o.c);
  }
};

// Evaluates every requested ratio on one dense vector w (w[i] is the coefficient of index i + 1).
class Kernel {
 public:
  Kernel(const SpaceSpec& space, const Request& req, Result& out) : space_(space), req_(req), out_(out) {}

  void run(std::span<const double> w) {
    w_.assign(w.begin(), w.end());
    d_ = w_.size();
    order_.clear();
    for (std::size_t p = 0; p < d_; ++p) {
      if (w_[p] != 0.0) order_.push_back(p);
    }
    if (order_.empty()) return;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(w_[a]) > std::abs(w_[b]); });
    s_ = order_.size();
    mags_.resize(s_);
    for (std::size_t i = 0; i < s_; ++i) mags_[i] = std::abs(w_[order_[i]]);
    group_begin_.clear();
    group_of_.assign(s_, 0);
    for (std::size_t i = 0; i < s_; ++i) {
      if (i == 0 || mags_[i] != mags_[i - 1]) group_begin_.push_back(i);
      group_of_[i] = group_begin_.size() - 1;
    }
    group_begin_.push_back(s_);
    mu_ = mags_[0];
    q_.resize(s_);
    for (std::size_t i = 0; i < s_; ++i) q_[i] = mags_[i] / mu_;

    ++out_.c.instances;
    buf_.assign(d_, 0.0);
    rest_ = w_;
    wn_ = eval(w_);

    if (req_.almost || req_.phi) subsets();
    if (req_.qg || req_.sqg || req_.tqg || req_.qglc || req_.almost || req_.theta) greedy_sets();
    if (req_.phi_u) signed_prefixes();
    if (req_.psi) psi();
    if (req_.cqg || req_.vpqg) orderings();
  }

 private:
  std::size_t groups() const { return group_begin_.size() - 1; }

  double eval(const std::vector<double>& b) {
    ++out_.c.evaluations;
    return space_.norm_dense(b);
  }

  Index index_of(std::size_t sorted_pos) const { return order_[sorted_pos] + 1; }

  CoefVector whole(double scale = 1.0) const {
    CoefVector x;
    for (std::size_t p : order_) x.set(p + 1, w_[p] * scale);
    return x;
  }

  CoefVector scaled() const { return whole(1.0 / mu_); }

  IndexSet index_set(const std::vector<std::size_t>& sorted_positions) const {
    IndexSet a;
    for (std::size_t i : sorted_positions) a.insert(index_of(i));
    return a;
  }

  void put(std::vector<double>& b, const std::vector<std::size_t>& sel, bool on) {
    for (std::size_t i : sel) b[order_[i]] = on ? w_[order_[i]] : 0.0;
  }

  // All subsets B of the support: phi candidates and the best residuals for almost greedy.
  void subsets() {
    best_rest_.clear();
    if (s_ > req_.subset_bits) {
      ++out_.c.trunc_subsets;
      return;
    }
    best_rest_.assign(s_ + 1, kInf);
    best_rest_mask_.assign(s_ + 1, 0);
    best_rest_[0] = wn_;
    std::vector<std::size_t> sel;
    for (std::uint32_t mask = 1; mask < (1U << s_); ++mask) {
      sel.clear();
      for (std::size_t i = 0; i < s_; ++i) {
        if (mask >> i & 1U) sel.push_back(i);
      }
      if (req_.phi) {
        put(buf_, sel, true);
        const double r = eval(buf_) / wn_;
        put(buf_, sel, false);
        const double level = q_[sel.back()];
        for (std::size_t ti = 0; ti < req_.t_grid.size(); ++ti) {
          if (level >= req_.t_grid[ti]) {
            offer(out_.phi[ti], r, [&] {
              Witness w;
              w.x = scaled();
              w.set_a = index_set(sel);
              w.t = req_.t_grid[ti];
              return w;
            });
          }
        }
      }
      if (req_.almost) {
        put(rest_, sel, false);
        const double nc = eval(rest_);
        put(rest_, sel, true);
        if (nc < best_rest_[sel.size()]) {
          best_rest_[sel.size()] = nc;
          best_rest_mask_[sel.size()] = mask;
        }
      }
    }
    for (std::size_t m = 1; m <= s_; ++m) {
      if (best_rest_[m - 1] < best_rest_[m]) {
        best_rest_[m] = best_rest_[m - 1];
        best_rest_mask_[m] = best_rest_mask_[m - 1];
      }
    }
  }

  // Greedy sets: all groups above g plus a nonempty subset of group g.
  void greedy_sets() {
    std::vector<std::size_t> sel;
    std::vector<double> signs(d_, 0.0);
    for (std::size_t g = 0; g < groups(); ++g) {
      const std::size_t gs = group_begin_[g];
      const std::size_t gsz = group_begin_[g + 1] - gs;
      const bool all = gsz <= req_.subset_bits;
      if (!all) ++out_.c.trunc_subsets;
      const std::uint64_t count = all ? (std::uint64_t{1} << gsz) - 1 : gsz;
      for (std::uint64_t c = 0; c < count; ++c) {
        sel.clear();
        for (std::size_t i = 0; i < gs; ++i) sel.push_back(i);
        if (all) {
          const std::uint64_t mask = c + 1;
          for (std::size_t i = 0; i < gsz; ++i) {
            if (mask >> i & 1U) sel.push_back(gs + i);
          }
        } else {
          for (std::size_t i = 0; i <= c; ++i) sel.push_back(gs + i);
        }
        const bool full_group = sel.size() == group_begin_[g + 1];
        const std::size_t m = sel.size();

        if (req_.qg || req_.qglc || req_.theta) {
          put(buf_, sel, true);
          const double r = eval(buf_) / wn_;
          put(buf_, sel, false);
          if (req_.qg) offer(out_.qg, r, [&] { return greedy_witness(sel); });
          if (req_.qglc && g == 0) {
            offer(out_.qglc, r, [&] {
              Witness w;
              w.set_a = index_set(sel);
              w.eps = SignPattern::of(whole(), w.set_a);
              w.x = complement_projection(scaled(), w.set_a);
              return w;
            });
          }
          if (req_.theta && full_group) {
            for (std::size_t ti = 0; ti < req_.t_grid.size(); ++ti) {
              if (q_[gs] >= req_.t_grid[ti]) {
                offer(out_.theta[ti], r, [&] {
                  Witness w;
                  w.x = scaled();
                  w.t = q_[gs];
                  w.set_a = index_set(sel);
                  return w;
                });
              }
            }
          }
        }
        if (req_.sqg || req_.almost) {
          put(rest_, sel, false);
          const double nc = eval(rest_);
          put(rest_, sel, true);
          if (req_.sqg) offer(out_.sqg, nc / wn_, [&] { return greedy_witness(sel); });
          if (req_.almost && m < s_ && !best_rest_.empty()) {
            const double den = best_rest_[m];
            offer(out_.almost, nc / den, [&] {
              Witness w = greedy_witness(sel);
              const std::uint32_t mask = best_rest_mask_[m];
              for (std::size_t i = 0; i < s_; ++i) {
                if (mask >> i & 1U) w.set_b.insert(index_of(i));
              }
              return w;
            });
          }
        }
        if (req_.tqg) {
          for (std::size_t i : sel) signs[order_[i]] = w_[order_[i]] < 0.0 ? -1.0 : 1.0;
          const double r = mags_[gs] * eval(signs) / wn_;
          for (std::size_t i : sel) signs[order_[i]] = 0.0;
          offer(out_.tqg, r, [&] { return greedy_witness(sel); });
        }
      }
    }
  }

  Witness greedy_witness(const std::vector<std::size_t>& sel) const {
    Witness w;
    w.x = whole();
    w.set_a = index_set(sel);
    return w;
  }

  // Best sign pattern on `sel` (first element fixed to +): returns (ratio, mask).
  std::pair<double, std::uint64_t> best_signs(const std::vector<std::size_t>& sel) {
    if (space_.sign_invariant() || sel.size() == 1) {
      put(buf_, sel, true);
      const double r = eval(buf_) / wn_;
      put(buf_, sel, false);
      return {r, 0};
    }
    double best = -1.0;
    std::uint64_t arg = 0;
    const std::uint64_t count = std::uint64_t{1} << (sel.size() - 1);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      for (std::size_t j = 0; j < sel.size(); ++j) {
        const bool flip = j > 0 && (mask >> (j - 1) & 1U);
        buf_[order_[sel[j]]] = flip ? -w_[order_[sel[j]]] : w_[order_[sel[j]]];
      }
      const double r = eval(buf_) / wn_;
      if (r > best) {
        best = r;
        arg = mask;
      }
    }
    put(buf_, sel, false);
    return {best, arg};
  }

  SignPattern sign_pattern(const std::vector<std::size_t>& sel, std::uint64_t mask) const {
    SignPattern a;
    for (std::size_t j = 0; j < sel.size(); ++j) a.set(index_of(sel[j]), j > 0 && (mask >> (j - 1) & 1U) ? -1 : 1);
    return a;
  }

  // phi_u: sign patterns on the level-set prefixes.
  void signed_prefixes() {
    std::vector<std::size_t> sel;
    for (std::size_t g = 0; g < groups(); ++g) {
      const std::size_t gs = group_begin_[g];
      for (std::size_t i = gs; i < group_begin_[g + 1]; ++i) sel.push_back(i);
      const double level = q_[gs];
      bool wanted = false;
      for (double t : req_.t_grid) wanted = wanted || level >= t;
      if (!wanted) break;
      std::pair<double, std::uint64_t> best;
      if (sel.size() > req_.subset_bits && !space_.sign_invariant()) {
        ++out_.c.trunc_signs;
        put(buf_, sel, true);
        best = {eval(buf_) / wn_, 0};
        put(buf_, sel, false);
      } else {
        best = best_signs(sel);
      }
      for (std::size_t ti = 0; ti < req_.t_grid.size(); ++ti) {
        if (level >= req_.t_grid[ti]) {
          offer(out_.phi_u[ti], best.first, [&] {
            Witness w;
            w.x = scaled();
            w.t = req_.t_grid[ti];
            w.set_a = index_set(sel);
            w.multipliers = sign_pattern(sel, best.second);
            return w;
          });
        }
      }
    }
  }

  // Psi: middle blocks Y made of a nonempty part of group a, the full groups strictly
  // between, and a nonempty part of group b (a <= b). The head block is as small as the
  // domination chain allows.
  void psi() {
    std::size_t spent = 0;
    bool truncated = false;
    const std::size_t nt = req_.psi_t.size();
    const std::size_t ns = req_.psi_s.size();
    auto subsets_of = [&](std::size_t g) {
      std::vector<std::vector<std::size_t>> out;
      const std::size_t gs = group_begin_[g];
      const std::size_t gsz = group_begin_[g + 1] - gs;
      if (gsz > req_.subset_bits) {
        truncated = true;
        for (std::size_t k = 1; k <= gsz; ++k) {
          std::vector<std::size_t> v;
          for (std::size_t i = 0; i < k; ++i) v.push_back(gs + i);
          out.push_back(std::move(v));
        }
        return out;
      }
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << gsz); ++mask) {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < gsz; ++i) {
          if (mask >> i & 1U) v.push_back(gs + i);
        }
        out.push_back(std::move(v));
      }
      return out;
    };

    std::vector<std::size_t> y;
    for (std::size_t a = 0; a < groups(); ++a) {
      const auto parts_a = subsets_of(a);
      for (std::size_t b = a; b < groups(); ++b) {
        const auto parts_b = a == b ? std::vector<std::vector<std::size_t>>{{}} : subsets_of(b);
        const double oscillation = mags_[group_begin_[a]] / mags_[group_begin_[b]];
        for (const auto& pa : parts_a) {
          for (const auto& pb : parts_b) {
            y = pa;
            for (std::size_t i = group_begin_[a + 1]; i < group_begin_[b] && a != b; ++i) y.push_back(i);
            y.insert(y.end(), pb.begin(), pb.end());
            const std::size_t head = group_begin_[a] + (a == b ? 0 : group_begin_[a + 1] - group_begin_[a] - pa.size());
            const double ysz = static_cast<double>(y.size());
            const double hsz = static_cast<double>(head);
            bool any = hsz <= req_.curve_t * ysz;
            for (std::size_t ti = 0; ti < nt && !any; ++ti) {
              for (std::size_t si = 0; si < ns && !any; ++si)
                any = hsz <= req_.psi_t[ti] * ysz && oscillation <= 1.0 / req_.psi_s[si];
            }
            if (!any) {
              ++out_.c.skipped;
              continue;
            }
            std::pair<double, std::uint64_t> best;
            const std::size_t patterns =
                space_.sign_invariant() ? 1 : (y.size() > 40 ? kPsiSignBudget + 1 : std::size_t{1} << (y.size() - 1));
            if (spent + patterns > kPsiSignBudget) {
              truncated = true;
              put(buf_, y, true);
              best = {eval(buf_) / wn_, 0};
              put(buf_, y, false);
              spent += 1;
            } else {
              best = best_signs(y);
              spent += patterns;
            }
            const std::vector<std::size_t> head_set = [&] {
              std::vector<std::size_t> h;
              for (std::size_t i = 0; i < group_begin_[a]; ++i) h.push_back(i);
              if (a != b) {
                for (std::size_t i = group_begin_[a]; i < group_begin_[a + 1]; ++i) {
                  if (!std::binary_search(pa.begin(), pa.end(), i)) h.push_back(i);
                }
              }
              return h;
            }();
            auto make = [&](double t, double s) {
              Witness w;
              const CoefVector all = whole();
              w.x = projection(all, index_set(head_set));
              w.y = projection(all, index_set(y));
              w.z = all - w.x - w.y;
              w.multipliers = sign_pattern(y, best.second);
              w.t = t;
              w.s = s;
              return w;
            };
            for (std::size_t ti = 0; ti < nt; ++ti) {
              for (std::size_t si = 0; si < ns; ++si) {
                if (hsz <= req_.psi_t[ti] * ysz && oscillation <= 1.0 / req_.psi_s[si]) {
                  offer(out_.psi[ti * ns + si], best.first, [&] { return make(req_.psi_t[ti], req_.psi_s[si]); });
                }
              }
            }
            if (hsz <= req_.curve_t * ysz) {
              auto [it, fresh] = out_.curve.emplace(oscillation, best.first);
              if (!fresh) it->second = std::max(it->second, best.first);
            }
          }
        }
      }
    }
    if (truncated) ++out_.c.trunc_psi;
  }

  // Cesaro and de la Vallee-Poussin sums along every greedy ordering (depth-first over the
  // tie blocks, so each distinct prefix is evaluated once).
  void orderings() {
    perm_.assign(s_, 0);
    for (std::size_t i = 0; i < s_; ++i) perm_[i] = i;
    leaves_ = 0;
    stop_ = false;
    dfs(0);
    if (stop_) ++out_.c.trunc_orderings;
  }

  std::vector<Index> ordering_witness(std::size_t length) const {
    std::vector<Index> o;
    for (std::size_t i : perm_) o.push_back(index_of(i));
    for (Index n = 1; o.size() < length; ++n) {
      if (w_.size() < n || w_[n - 1] == 0.0) o.push_back(n);
    }
    return o;
  }

  void vp_offer(std::size_t n, std::size_t tail) {
    for (std::size_t j = 0; j < n; ++j) buf_[order_[perm_[j]]] = w_[order_[perm_[j]]];
    for (std::size_t j = 1; j <= tail; ++j) {
      const std::size_t p = order_[perm_[n + j - 1]];
      buf_[p] = cesaro_weight(n, j) * w_[p];
    }
    const double r = eval(buf_) / wn_;
    for (std::size_t j = 0; j < n + tail; ++j) buf_[order_[perm_[j]]] = 0.0;
    offer(out_.vpqg, r, [&] {
      Witness w;
      w.x = whole();
      w.ordering = ordering_witness(std::max(s_, 2 * n));
      w.n = n;
      return w;
    });
  }

  void dfs(std::size_t k) {
    if (k > 0) {
      if (req_.cqg) {
        for (std::size_t j = 0; j < k; ++j) {
          const std::size_t p = order_[perm_[j]];
          buf_[p] = cesaro_weight(k, j + 1) * w_[p];
        }
        const double r = eval(buf_) / wn_;
        for (std::size_t j = 0; j < k; ++j) buf_[order_[perm_[j]]] = 0.0;
        offer(out_.cqg, r, [&] {
          Witness w;
          w.x = whole();
          w.ordering = ordering_witness(s_);
          w.n = k;
          return w;
        });
      }
      if (req_.vpqg && k % 2 == 0) vp_offer(k / 2, k / 2);
    }
    if (k == s_) {
      if (req_.vpqg) {
        for (std::size_t n = s_ / 2 + 1; n < s_; ++n) vp_offer(n, s_ - n);
      }
      if (++leaves_ >= req_.ordering_cap) stop_ = true;
      return;
    }
    const std::size_t end = group_begin_[group_of_[k] + 1];
    for (std::size_t i = k; i < end; ++i) {
      std::swap(perm_[k], perm_[i]);
      dfs(k + 1);
      std::swap(perm_[k], perm_[i]);
      if (stop_) return;
    }
  }

  const SpaceSpec& space_;
  const Request& req_;
  Result& out_;
  std::vector<double> w_, buf_, rest_, mags_, q_;
  std::vector<std::size_t> order_, group_begin_, group_of_, perm_;
  std::size_t d_ = 0, s_ = 0, leaves_ = 0;
  bool stop_ = false;
  double wn_ = 0.0, mu_ = 1.0;
  std::vector<double> best_rest_;
  std::vector<std::uint32_t> best_rest_mask_;
};

void validate_grid(const std::vector<double>& grid, const char* what, bool allow_zero, bool at_most_one) {
  if (grid.empty()) throw InputError(std::string(what) + " grid is empty");
  for (double t : grid) {
    const bool ok = std::isfinite(t) && (allow_zero ? t >= 0.0 : t > 0.0) && (!at_most_one || t <= 1.0);
    if (!ok) throw InputError(std::string(what) + " grid value out of range");
  }
}

Result run_search(const SpaceSpec& space, const SearchConfig& config, Request req) {
  Result merged;
  merged.size_for(req);
  req.subset_bits = std::min<std::size_t>(config.subset_bits, 30);
  if (config.exhaustive) {
    const ExhaustiveFamily& fam = *config.exhaustive;
    const std::uint64_t total = family_code_count(fam);
    if (fam.dimension > space.cap()) throw DomainError("family dimension exceeds the space dimension cap");
    req.ordering_cap = fam.ordering_cap;
    // sign-invariant norms: one representative per sign class
    const bool positive_only = space.sign_invariant();
    auto parts = run_chunks(total, config.jobs, [&](std::size_t begin, std::size_t end) {
      Result r;
      r.size_for(req);
      Kernel kernel(space, req, r);
      std::vector<double> dense;
      for (std::size_t code = begin; code < end; ++code) {
        if (!family_vector(fam, code, dense)) continue;
        if (positive_only && std::any_of(dense.begin(), dense.end(), [](double v) { return v < 0.0; })) continue;
        kernel.run(dense);
      }
      return r;
    });
    for (auto& p : parts) merged.merge(p);
  } else {
    if (config.samples == 0) throw BudgetError("empty search budget", 0);
    req.ordering_cap = config.ordering_cap;
    const std::size_t dim = std::min(config.dimension, space.cap());
    auto parts = run_chunks(config.samples, config.jobs, [&](std::size_t begin, std::size_t end) {
      Result r;
      r.size_for(req);
      Kernel kernel(space, req, r);
      for (std::size_t i = begin; i < end; ++i) kernel.run(sample_dense(config, dim, i));
      return r;
    });
    for (auto& p : parts) merged.merge(p);
  }
  return merged;
}

Witness floor_witness(ConstantKind kind, double t = 1.0, double s = 1.0) {
  Witness w;
  switch (kind) {
    case ConstantKind::CesaroQuasiGreedy:
      w.x = CoefVector{{1, 1.0}};
      w.ordering = {1};
      w.n = 1;
      break;
    case ConstantKind::VallePoussinQuasiGreedy:
      w.x = CoefVector{{1, 1.0}};
      w.ordering = {1, 2};
      w.n = 1;
      break;
    case ConstantKind::SuppressionQuasiGreedy:
    case ConstantKind::AlmostGreedy:
      w.x = CoefVector{{1, 1.0}};
      break;
    case ConstantKind::Qglc:
      w.set_a = {1};
      w.eps = SignPattern{{1, 1}};
      break;
    case ConstantKind::SuppressionUcc:
      w.set_a = {1};
      w.set_b = {1};
      w.eps = SignPattern{{1, 1}};
      break;
    case ConstantKind::Ucc:
      w.set_a = {1};
      w.eps = SignPattern{{1, 1}};
      w.eps2 = SignPattern{{1, 1}};
      break;
    case ConstantKind::Psi:
      w.y = CoefVector{{1, 1.0}};
      w.multipliers = SignPattern{{1, 1}};
      w.t = t;
      w.s = s;
      break;
    case ConstantKind::SignedNearUnconditionality:
      w.x = CoefVector{{1, 1.0}};
      w.multipliers = SignPattern{{1, 1}};
      w.set_a = {1};
      w.t = t;
      break;
    case ConstantKind::ThresholdingBoundedness:
      w.x = CoefVector{{1, 1.0}};
      w.set_a = {1};
      w.t = 1.0;
      break;
    default:
      w.x = CoefVector{{1, 1.0}};
      w.set_a = {1};
      w.t = t;
      break;
  }
  return w;
}

std::size_t truncations_for(ConstantKind kind, const Counters& c) {
  switch (kind) {
    case ConstantKind::CesaroQuasiGreedy:
    case ConstantKind::VallePoussinQuasiGreedy:
      return c.trunc_orderings;
    case ConstantKind::SignedNearUnconditionality:
      return c.trunc_signs;
    case ConstantKind::Psi:
      return c.trunc_psi;
    case ConstantKind::QuasiGreedy:
    case ConstantKind::SuppressionQuasiGreedy:
    case ConstantKind::TruncationQuasiGreedy:
    case ConstantKind::Qglc:
    case ConstantKind::AlmostGreedy:
    case ConstantKind::NearUnconditionality:
    case ConstantKind::ThresholdingBoundedness:
      return c.trunc_subsets;
    default:
      return 0;
  }
}

ConstantEstimate finish(const SpaceSpec& space, const SearchConfig& config, ConstantKind kind, Best& found,
                        const Counters& c, double t = 1.0, double s = 1.0) {
  ConstantEstimate e;
  e.kind = kind;
  Best floor;
  floor.witness = floor_witness(kind, t, s);
  floor.value = evaluate_witness(space, kind, floor.witness);
  take_better(floor, found);
  e.value = floor.value;
  e.witness = std::move(floor.witness);
  e.budget.seed = config.seed;
  e.budget.samples = config.exhaustive ? 0 : config.samples;
  e.budget.family = config.exhaustive ? config.exhaustive->describe() : "";
  e.budget.instances = c.instances;
  e.budget.evaluations = c.evaluations;
  e.budget.truncated = truncations_for(kind, c);
  e.budget.skipped = kind == ConstantKind::Psi ? c.skipped : 0;
  e.mode = config.exhaustive && e.budget.truncated == 0 ? EstimateMode::ExactOverFamily : EstimateMode::RandomSearch;
  return e;
}

Best* slot(Result& r, ConstantKind kind) {
  switch (kind) {
    case ConstantKind::QuasiGreedy:
      return &r.qg;
    case ConstantKind::SuppressionQuasiGreedy:
      return &r.sqg;
    case ConstantKind::CesaroQuasiGreedy:
      return &r.cqg;
    case ConstantKind::VallePoussinQuasiGreedy:
      return &r.vpqg;
    case ConstantKind::Qglc:
      return &r.qglc;
    case ConstantKind::TruncationQuasiGreedy:
      return &r.tqg;
    case ConstantKind::AlmostGreedy:
      return &r.almost;
    default:
      return nullptr;
  }
}

ThresholdFunctionEstimate threshold_estimate(const SpaceSpec& space, const SearchConfig& config, ConstantKind kind,
                                             const std::vector<double>& grid, std::vector<Best>& found,
                                             const Counters& c) {
  ThresholdFunctionEstimate out;
  out.kind = kind;
  for (std::size_t i = 0; i < grid.size(); ++i) out.grid.push_back({grid[i], finish(space, config, kind, found[i], c, grid[i])});
  return out;
}

}  // namespace

std::vector<double> default_t_grid() { return {1.0, 0.5, 0.25, 0.125, 0.0625}; }
std::vector<double> default_psi_t_grid() { return {0.0, 0.5, 1.0, 2.0, 4.0}; }
std::vector<double> default_psi_s_grid() { return {1.0, 0.5, 0.25}; }

std::map<ConstantKind, ConstantEstimate> estimate_constants(const SpaceSpec& space, const SearchConfig& config,
                                                            const std::vector<ConstantKind>& kinds) {
  Request req;
  for (ConstantKind k : kinds) {
    switch (k) {
      case ConstantKind::QuasiGreedy: req.qg = true; break;
      case ConstantKind::SuppressionQuasiGreedy: req.sqg = true; break;
      case ConstantKind::CesaroQuasiGreedy: req.cqg = true; break;
      case ConstantKind::VallePoussinQuasiGreedy: req.vpqg = true; break;
      case ConstantKind::Qglc: req.qglc = true; break;
      case ConstantKind::TruncationQuasiGreedy: req.tqg = true; break;
      case ConstantKind::AlmostGreedy: req.almost = true; break;
      default:
        throw InputError("estimate_constants handles vector-searched scalar constants only, not '" + to_string(k) + "'");
    }
  }
  Result r = run_search(space, config, req);
  std::map<ConstantKind, ConstantEstimate> out;
  for (ConstantKind k : kinds) out.emplace(k, finish(space, config, k, *slot(r, k), r.c));
  return out;
}

ConstantEstimate qg_constant(const SpaceSpec& space, const SearchConfig& config) {
  return estimate_constants(space, config, {ConstantKind::QuasiGreedy}).at(ConstantKind::QuasiGreedy);
}
ConstantEstimate suppression_qg_constant(const SpaceSpec& space, const SearchConfig& config) {
  return estimate_constants(space, config, {ConstantKind::SuppressionQuasiGreedy}).at(ConstantKind::SuppressionQuasiGreedy);
}
ConstantEstimate cqg_constant(const SpaceSpec& space, const SearchConfig& config) {
  return estimate_constants(space, config, {ConstantKind::CesaroQuasiGreedy}).at(ConstantKind::CesaroQuasiGreedy);
}
ConstantEstimate vpqg_constant(const SpaceSpec& space, const SearchConfig& config) {
  return estimate_constants(space, config, {ConstantKind::VallePoussinQuasiGreedy}).at(ConstantKind::VallePoussinQuasiGreedy);
}
ConstantEstimate qglc_constant(const SpaceSpec& space, const SearchConfig& config) {
  return estimate_constants(space, config, {ConstantKind::Qglc}).at(ConstantKind::Qglc);
}
ConstantEstimate tqg_constant(const SpaceSpec& space, const SearchConfig& config) {
  return estimate_constants(space, config, {ConstantKind::TruncationQuasiGreedy}).at(ConstantKind::TruncationQuasiGreedy);
}
ConstantEstimate almost_greedy_constant(const SpaceSpec& space, const SearchConfig& config) {
  return estimate_constants(space, config, {ConstantKind::AlmostGreedy}).at(ConstantKind::AlmostGreedy);
}

double ThresholdFunctionEstimate::at(double t) const {
  for (const auto& p : grid) {
    if (p.t == t) return p.estimate.value;
  }
  throw InputError("threshold value is not on the grid");
}

ThresholdFunctions threshold_functions(const SpaceSpec& space, const std::vector<double>& t_grid,
                                       const SearchConfig& config) {
  validate_grid(t_grid, "threshold", false, true);
  Request req;
  req.phi = req.theta = req.phi_u = true;
  req.t_grid = t_grid;
  Result r = run_search(space, config, req);
  ThresholdFunctions out;
  out.phi = threshold_estimate(space, config, ConstantKind::NearUnconditionality, t_grid, r.phi, r.c);
  out.theta = threshold_estimate(space, config, ConstantKind::ThresholdingBoundedness, t_grid, r.theta, r.c);
  out.phi_u = threshold_estimate(space, config, ConstantKind::SignedNearUnconditionality, t_grid, r.phi_u, r.c);
  return out;
}

ThresholdFunctionEstimate phi_function(const SpaceSpec& space, const std::vector<double>& t_grid,
                                       const SearchConfig& config) {
  validate_grid(t_grid, "threshold", false, true);
  Request req;
  req.phi = true;
  req.t_grid = t_grid;
  Result r = run_search(space, config, req);
  return threshold_estimate(space, config, ConstantKind::NearUnconditionality, t_grid, r.phi, r.c);
}

ThresholdFunctionEstimate theta_function(const SpaceSpec& space, const std::vector<double>& t_grid,
                                         const SearchConfig& config) {
  validate_grid(t_grid, "threshold", false, true);
  Request req;
  req.theta = true;
  req.t_grid = t_grid;
  Result r = run_search(space, config, req);
  return threshold_estimate(space, config, ConstantKind::ThresholdingBoundedness, t_grid, r.theta, r.c);
}

ThresholdFunctionEstimate phi_u_function(const SpaceSpec& space, const std::vector<double>& t_grid,
                                         const SearchConfig& config) {
  validate_grid(t_grid, "threshold", false, true);
  Request req;
  req.phi_u = true;
  req.t_grid = t_grid;
  Result r = run_search(space, config, req);
  return threshold_estimate(space, config, ConstantKind::SignedNearUnconditionality, t_grid, r.phi_u, r.c);
}

const ConstantEstimate& PsiGrid::at(double t, double s) const {
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    for (std::size_t j = 0; j < s_values.size(); ++j) {
      if (t_values[i] == t && s_values[j] == s) return values[i * s_values.size() + j];
    }
  }
  throw InputError("(t, s) is not on the Psi grid");
}

double PsiGrid::curve_value(double m) const {
  double v = 1.0;
  for (const auto& [o, r] : curve) {
    if (o <= m) v = std::max(v, r);
  }
  return v;
}

PsiGrid psi_grid(const SpaceSpec& space, const std::vector<double>& t_values, const std::vector<double>& s_values,
                 const SearchConfig& config, double curve_t) {
  validate_grid(t_values, "Psi t", true, false);
  validate_grid(s_values, "Psi s", false, true);
  if (!(curve_t >= 0.0)) throw InputError("Psi curve parameter must be nonnegative");
  Request req;
  req.psi = true;
  req.psi_t = t_values;
  req.psi_s = s_values;
  req.curve_t = curve_t;
  Result r = run_search(space, config, req);
  PsiGrid out;
  out.t_values = t_values;
  out.s_values = s_values;
  out.curve_t = curve_t;
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    for (std::size_t j = 0; j < s_values.size(); ++j) {
      out.values.push_back(
          finish(space, config, ConstantKind::Psi, r.psi[i * s_values.size() + j], r.c, t_values[i], s_values[j]));
    }
  }
  double running = 1.0;
  for (const auto& [o, v] : r.curve) {
    if (v > running) {
      running = v;
      out.curve.emplace_back(o, v);
    }
  }
  return out;
}

ConstantEstimate psi_estimate(const SpaceSpec& space, double t, double s, const SearchConfig& config) {
  return psi_grid(space, {t}, {s}, config, t).values.at(0);
}

}  // namespace tga
