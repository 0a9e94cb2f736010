#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tga/errors.hpp"
#include "tga/spaces.hpp"

namespace tga {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-12;
constexpr std::size_t kVertexBudget = 200000;

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Constraint system |a_k| <= 1 (k < d) and |<rows[f], a>| <= 1.
struct Polytope {
  std::size_t d = 0;
  std::size_t target = 0;
  std::vector<std::vector<double>> rows;
};

Polytope build(const std::vector<CoefVector>& functionals, Index n) {
  IndexSet coords{n};
  for (const auto& f : functionals) {
    for (const auto& [k, v] : f) coords.insert(k);
  }
  std::vector<Index> sorted(coords.begin(), coords.end());
  Polytope poly;
  poly.d = sorted.size();
  poly.target = static_cast<std::size_t>(std::find(sorted.begin(), sorted.end(), n) - sorted.begin());
  for (const auto& f : functionals) {
    std::vector<double> row(poly.d, 0.0);
    for (std::size_t i = 0; i < poly.d; ++i) row[i] = f[sorted[i]];
    poly.rows.push_back(std::move(row));
  }
  return poly;
}

bool feasible(const Polytope& poly, const Eigen::VectorXd& a) {
  for (std::size_t k = 0; k < poly.d; ++k) {
    if (std::abs(a[static_cast<Eigen::Index>(k)]) > 1.0 + kFeasTol) return false;
  }
  for (const auto& row : poly.rows) {
    double s = 0.0;
    for (std::size_t k = 0; k < poly.d; ++k) s += row[k] * a[static_cast<Eigen::Index>(k)];
    if (std::abs(s) > 1.0 + kFeasTol) return false;
  }
  return true;
}

double solve_vertices(const Polytope& poly) {
  const std::size_t d = poly.d;
  const std::size_t pairs = d + poly.rows.size();
  const auto di = static_cast<Eigen::Index>(d);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(d);
  for (std::size_t i = 0; i < d; ++i) pick[i] = i;
  Eigen::MatrixXd m(di, di);
  Eigen::VectorXd rhs(di);
  while (true) {
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t h = pick[r];
      for (std::size_t c = 0; c < d; ++c) {
        double v = h < d ? (h == c ? 1.0 : 0.0) : poly.rows[h - d][c];
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.rank() == di) {
      for (std::size_t signs = 0; signs < (std::size_t{1} << d); ++signs) {
        for (std::size_t r = 0; r < d; ++r) rhs[static_cast<Eigen::Index>(r)] = (signs >> r) & 1U ? -1.0 : 1.0;
        Eigen::VectorXd a = lu.solve(rhs);
        if (feasible(poly, a)) best = std::max(best, a[static_cast<Eigen::Index>(poly.target)]);
      }
    }
    // next combination of d hyperplane pairs out of `pairs`
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == pairs - d + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return std::min(best, 1.0);
}

// Dense tableau simplex (Bland's rule) for max c.x, Ax <= b, x >= 0 with b >= 0.
double simplex_max(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                   const std::vector<double>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  const std::size_t width = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::copy(a[i].begin(), a[i].end(), t[i].begin());
    t[i][n + i] = 1.0;
    t[i][width - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  for (std::size_t iter = 0; iter < 100000; ++iter) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t[m][j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == width) return t[m][width - 1];
    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > kPivotTol) {
        double ratio = t[i][width - 1] / t[i][enter];
        if (ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && leave < m && basis[i] < basis[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw std::runtime_error("dual-norm linear program is unbounded");
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = t[i][enter];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
  }
  throw BudgetError("simplex iteration limit reached", 100000);
}

double solve_simplex(const Polytope& poly) {
  const std::size_t d = poly.d;
  // a = p - q with p, q >= 0
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  auto add = [&](const std::vector<double>& row) {
    std::vector<double> full(2 * d);
    for (std::size_t k = 0; k < d; ++k) {
      full[k] = row[k];
      full[d + k] = -row[k];
    }
    a.push_back(std::move(full));
    b.push_back(1.0);
  };
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> row(d, 0.0);
    row[k] = 1.0;
    add(row);
    row[k] = -1.0;
    add(row);
  }
  for (const auto& r : poly.rows) {
    add(r);
    std::vector<double> neg(r);
    for (double& v : neg) v = -v;
    add(neg);
  }
  std::vector<double> c(2 * d, 0.0);
  c[poly.target] = 1.0;
  c[d + poly.target] = -1.0;
  return std::min(simplex_max(a, b, c), 1.0);
}

}  // namespace

DualNormResult max_functionals_dual(const std::vector<CoefVector>& functionals, Index n,
                                    bool force_simplex) {
  Polytope poly = build(functionals, n);
  bool touched = false;
  for (const auto& f : functionals) touched = touched || f.contains(n);
  if (!touched) return {1.0, DualRoute::ClosedForm};
  const double combos = binomial(poly.d + poly.rows.size(), poly.d) * std::ldexp(1.0, static_cast<int>(poly.d));
  if (!force_simplex && poly.d <= 8 && combos <= static_cast<double>(kVertexBudget)) {
    return {solve_vertices(poly), DualRoute::VertexEnumeration};
  }
  return {solve_simplex(poly), DualRoute::Simplex};
}

}  // namespace tga
