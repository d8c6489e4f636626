#pragma once

// Independent reference computations for tests. Nothing here calls into the
// solver code paths under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Edge
{
  int a_row, a_col, b_row, b_col;  // b is the right or lower neighbour
};

inline std::vector<Edge> edges(int m, int n)
{
  std::vector<Edge> out;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j + 1 < n; ++j) out.push_back({i, j, i, j + 1});
  for (int i = 0; i + 1 < m; ++i)
    for (int j = 0; j < n; ++j) out.push_back({i, j, i + 1, j});
  return out;
}

inline double tv(const Mat& t)
{
  double s = 0.0;
  for (const Edge& e : edges(static_cast<int>(t.rows()), static_cast<int>(t.cols())))
    s += std::abs(t(e.b_row, e.b_col) - t(e.a_row, e.a_col));
  return s;
}

/// argmin 1/2 ||y - theta||^2 + sum_e w_e |grad_e theta| by exact coordinate
/// minimization over the box-constrained dual, one edge at a time.
inline Mat weighted_prox_cd(const Mat& y, const std::vector<double>& w, int sweeps = 200000, double tol = 1e-13)
{
  const auto es = edges(static_cast<int>(y.rows()), static_cast<int>(y.cols()));
  std::vector<double> p(es.size(), 0.0);
  Mat theta = y;
  for (int s = 0; s < sweeps; ++s) {
    double moved = 0.0;
    for (std::size_t k = 0; k < es.size(); ++k) {
      const Edge& e = es[k];
      const double g = theta(e.b_row, e.b_col) - theta(e.a_row, e.a_col);
      const double np = std::clamp(p[k] + 0.5 * g, -w[k], w[k]);
      const double d = np - p[k];
      if (d == 0.0) continue;
      p[k] = np;
      theta(e.b_row, e.b_col) -= d;
      theta(e.a_row, e.a_col) += d;
      moved = std::max(moved, std::abs(d));
    }
    if (moved < tol) break;
  }
  return theta;
}

/// argmin ||y - theta||^2 + lambda tv(theta).
inline Mat penalized_cd(const Mat& y, double lambda)
{
  const std::size_t k = edges(static_cast<int>(y.rows()), static_cast<int>(y.cols())).size();
  return weighted_prox_cd(y, std::vector<double>(k, 0.5 * lambda));
}

/// Projection onto {tv <= V} by plain bisection on lambda over penalized_cd.
inline Mat constrained_cd(const Mat& y, double V)
{
  if (tv(y) <= V) return y;
  double lo = 0.0, hi = 1.0;
  while (tv(penalized_cd(y, hi)) > V) hi *= 2.0;
  Mat best = penalized_cd(y, hi);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    Mat t = penalized_cd(y, mid);
    if (tv(t) > V)
      lo = mid;
    else {
      hi = mid;
      best = t;
    }
    if (std::abs(tv(best) - V) <= 1e-10 * std::max(V, 1.0)) break;
  }
  return best;
}

/// Coarse-to-fine grid minimization of f over a box in R^d, points with
/// feasible(x) == false skipped. Each stage re-centres on the best point and
/// shrinks the box by `shrink`.
inline std::vector<double> grid_minimize(const std::function<double(const std::vector<double>&)>& f,
                                         const std::function<bool(const std::vector<double>&)>& feasible,
                                         std::vector<double> centre, double half_width, int points_per_side,
                                         int stages, double shrink)
{
  const std::size_t d = centre.size();
  std::vector<double> best = centre;
  for (int stage = 0; stage < stages; ++stage) {
    const double step = 2.0 * half_width / (points_per_side - 1);
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> winner = best;
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    for (;;) {
      for (std::size_t k = 0; k < d; ++k) x[k] = centre[k] - half_width + step * idx[k];
      if (feasible(x)) {
        const double v = f(x);
        if (v < best_f) {
          best_f = v;
          winner = x;
        }
      }
      std::size_t k = 0;
      while (k < d && ++idx[k] == points_per_side) idx[k++] = 0;
      if (k == d) break;
    }
    best = winner;
    centre = winner;
    half_width *= shrink;
  }
  return best;
}

inline Mat from_vec(const std::vector<double>& x, int m, int n)
{
  Mat t(m, n);
  for (int k = 0; k < m * n; ++k) t.data()[k] = x[static_cast<std::size_t>(k)];
  return t;
}

// tv of a 2x2 grid stored row-major in x
inline double tv_2x2(const std::vector<double>& x)
{
  return std::abs(x[1] - x[0]) + std::abs(x[3] - x[2]) + std::abs(x[2] - x[0]) + std::abs(x[3] - x[1]);
}

inline double dist2_2x2(const Mat& y, const std::vector<double>& x)
{
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += (y.data()[k] - x[static_cast<std::size_t>(k)]) * (y.data()[k] - x[static_cast<std::size_t>(k)]);
  return s;
}

/// Coarse-to-fine grid minimizer of ||y - theta||^2 + lambda tv(theta), 2x2.
inline Mat penalized_grid_2x2(const Mat& y, double lambda)
{
  const double r = std::max(1.0, y.cwiseAbs().maxCoeff());
  auto f = [&](const std::vector<double>& x) { return dist2_2x2(y, x) + lambda * tv_2x2(x); };
  auto x = grid_minimize(f, [](const auto&) { return true; }, {0, 0, 0, 0}, r, 31, 7, 0.15);
  return from_vec(x, 2, 2);
}

/// Coarse-to-fine grid minimizer of ||y - theta||^2 subject to tv(theta) <= V, 2x2.
inline Mat constrained_grid_2x2(const Mat& y, double V)
{
  const double r = std::max(1.0, y.cwiseAbs().maxCoeff());
  auto f = [&](const std::vector<double>& x) { return dist2_2x2(y, x); };
  auto ok = [&](const std::vector<double>& x) { return tv_2x2(x) <= V + 1e-12; };
  auto x = grid_minimize(f, ok, {0, 0, 0, 0}, r, 31, 7, 0.15);
  return from_vec(x, 2, 2);
}

}  // namespace oracle
