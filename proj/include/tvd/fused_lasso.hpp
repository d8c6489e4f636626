#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Core>

#include "tvd/errors.hpp"

namespace tvd {

/// Exact solver for the weighted one-dimensional fused lasso
///
///   min_b  1/2 sum_i (y_i - b_i)^2 + sum_i w_i |b_{i+1} - b_i|
///
/// by forward dynamic programming over the derivative of the message
/// function (piecewise linear, stored as a deque of knots) and a clamping
/// backward pass. Linear time amortized. Holds scratch buffers, so reuse one
/// instance across many solves; not thread-safe.
class FusedLasso1D
{
public:
  /// `weights` has y.size() - 1 nonnegative entries. `out` may alias nothing
  /// in `y`; any Eigen vector expressions (strided columns included) work.
  template <typename In, typename W, typename Out>
  void solve(const Eigen::DenseBase<In>& y, const Eigen::DenseBase<W>& weights, Eigen::DenseBase<Out>& out);

  template <typename In, typename W, typename Out>
  void solve(const Eigen::DenseBase<In>& y, const Eigen::DenseBase<W>& weights, Eigen::DenseBase<Out>&& out)
  {
    solve(y, weights, out);
  }

private:
  struct Knot
  {
    double pos;
    double dslope;      // slope change when crossing left to right
    double dintercept;  // intercept change when crossing left to right
  };

  std::vector<Knot> knots_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

template <typename In, typename W, typename Out>
void FusedLasso1D::solve(const Eigen::DenseBase<In>& y, const Eigen::DenseBase<W>& weights, Eigen::DenseBase<Out>& out)
{
  const Eigen::Index k = y.size();
  if (k == 0) return;
  if (weights.size() != k - 1 || out.size() != k) throw ShapeError("FusedLasso1D: size mismatch");
  if (k == 1) {
    out(0) = y(0);
    return;
  }

  knots_.resize(static_cast<std::size_t>(2 * k + 2));
  lower_.resize(static_cast<std::size_t>(k));
  upper_.resize(static_cast<std::size_t>(k));

  // Live knots occupy [head, tail). The derivative of the running objective is
  // slope * b + intercept left of the first knot (left_*) and right of the last (right_*).
  std::size_t head = static_cast<std::size_t>(k + 1);
  std::size_t tail = head;
  double left_slope = 1.0, left_icpt = -y(0);
  double right_slope = 1.0, right_icpt = -y(0);

  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    const double lam = weights(i);

    // where the derivative reaches -lam, scanning from the left
    double a = left_slope, b = left_icpt;
    while (head < tail && a * knots_[head].pos + b < -lam) {
      a += knots_[head].dslope;
      b += knots_[head].dintercept;
      ++head;
    }
    const double lo = (-lam - b) / a;

    // where it reaches +lam, scanning from the right
    double c = right_slope, d = right_icpt;
    while (head < tail && c * knots_[tail - 1].pos + d > lam) {
      c -= knots_[tail - 1].dslope;
      d -= knots_[tail - 1].dintercept;
      --tail;
    }
    const double hi = (lam - d) / c;

    lower_[static_cast<std::size_t>(i)] = lo;
    upper_[static_cast<std::size_t>(i)] = hi;

    // clip the derivative to [-lam, lam], then add the next quadratic term
    knots_[--head] = {lo, a, b + lam};
    knots_[tail++] = {hi, -c, lam - d};
    const double next = y(i + 1);
    left_slope = 1.0;
    left_icpt = -lam - next;
    right_slope = 1.0;
    right_icpt = lam - next;
  }

  double a = left_slope, b = left_icpt;
  while (head < tail && a * knots_[head].pos + b < 0.0) {
    a += knots_[head].dslope;
    b += knots_[head].dintercept;
    ++head;
  }
  double x = -b / a;
  out(k - 1) = x;
  for (Eigen::Index i = k - 2; i >= 0; --i) {
    x = std::clamp(x, lower_[static_cast<std::size_t>(i)], upper_[static_cast<std::size_t>(i)]);
    out(i) = x;
  }
}

}  // namespace tvd
