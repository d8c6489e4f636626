#pragma once

#include <vector>

#include "tvd/core.hpp"

namespace tvd {

/// Axis-aligned rectangle of grid indices, bounds inclusive.
struct Rect
{
  Index row_lo = 0;
  Index row_hi = 0;
  Index col_lo = 0;
  Index col_hi = 0;

  Index rows() const { return row_hi - row_lo + 1; }
  Index cols() const { return col_hi - col_lo + 1; }
  Index size() const { return rows() * cols(); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// View of theta restricted to `r`.
template <typename Derived>
auto submatrix(const Eigen::MatrixBase<Derived>& theta, const Rect& r)
{
  return theta.block(r.row_lo, r.col_lo, r.rows(), r.cols());
}

/// Ordered rectangles covering a rows x cols grid exactly once.
struct RectPartition
{
  Index rows = 0;
  Index cols = 0;
  std::vector<Rect> rects;

  /// Throws ArgumentError unless the rects are in range, pairwise disjoint and
  /// cover the grid.
  void validate() const;
};

/// Greedy (TV, eps) quadtree scheme. A block with tv <= eps is kept; any other
/// block is split into up to four children, the top-left one taking
/// ceil(rows/2) rows and ceil(cols/2) cols. A side of length 1 is not split.
/// Rects come out depth first in top-left, top-right, bottom-left,
/// bottom-right order.
RectPartition greedy_tv_partition(const ImageMatrix& theta, double eps);

/// Contiguous index range [lo, hi], inclusive.
struct Segment
{
  Index lo = 0;
  Index hi = 0;

  Index size() const { return hi - lo + 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Functional driving the binary scheme.
enum class SegmentFunctional {
  tv_rows_of_columns,  ///< split the columns; a block is scored by tv_rows of its columns
  tv_cols_of_rows,     ///< split the rows; a block is scored by tv_cols of its rows
  vector_tv,           ///< split a vector; a block is scored by its 1D tv
};

/// Binary (T, eps) scheme: a block with T <= eps is kept, any other block U
/// is cut into a first part of floor(|U|/2) and the rest. For vector_tv,
/// `u` must be a single row or a single column.
std::vector<Segment> greedy_1d_partition(SegmentFunctional functional, const ImageMatrix& u, double eps);

/// Piecewise-constant matrix holding the mean of theta on each rect.
ImageMatrix block_average(const ImageMatrix& theta, const RectPartition& partition);

struct GnsBound
{
  double lhs = 0.0;  ///< sum (theta_ij - mean)^2
  double rhs = 0.0;  ///< (5 + 4 m n / min(m, n)^2) tv(theta)^2
};

/// Both sides of the discrete Gagliardo-Nirenberg-Sobolev inequality.
GnsBound gns_bound(const ImageMatrix& theta);

/// Initial block tolerance of the net construction:
/// min{eps^2 / (6 tv log2 n), eps / sqrt(6 log2 n)} with n the longer side and
/// log2 n taken as at least 1.
double epsilon_net_eta(const ImageMatrix& theta, double eps);

/// Point of an eps-net of {theta : ||theta||_inf <= L} close to theta.
/// Block-averages theta over greedy_tv_partition(theta, eta), then rounds every
/// block value to the grid -L + k h, h = eps / sqrt(m n). eta starts at
/// epsilon_net_eta and is halved until the averaging error is at most eps,
/// so ||theta - out|| <= 2 eps.
ImageMatrix epsilon_net_representative(const ImageMatrix& theta, double eps, double L);

}  // namespace tvd
