#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "tvd/errors.hpp"
#include "tvd/image.hpp"

namespace tvd {

using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Validation

/// Throws ArgumentError unless `theta` is non-empty with all entries finite.
template <typename Derived>
void validate(const Eigen::MatrixBase<Derived>& theta)
{
  if (theta.rows() < 1 || theta.cols() < 1)
    throw ArgumentError("matrix must have at least one row and one column");
  if (!theta.allFinite())
    throw ArgumentError("matrix contains non-finite entries");
}

// ---------------------------------------------------------------------------
// Grid edges
//
// A horizontal edge anchored at (i, j) joins (i, j) to (i, j + 1); a vertical
// edge anchored at (i, j) joins (i, j) to (i + 1, j). The anchor is e-, the
// other endpoint e+. Canonical order: all horizontal edges row-major, then all
// vertical edges row-major.

enum class Orientation { horizontal, vertical };

struct EdgeIndex
{
  Orientation orientation = Orientation::horizontal;
  Index row = 0;
  Index col = 0;

  friend bool operator==(const EdgeIndex&, const EdgeIndex&) = default;
};

inline Index horizontal_edge_count(Index rows, Index cols) { return rows * (cols - 1); }
inline Index vertical_edge_count(Index rows, Index cols) { return (rows - 1) * cols; }
inline Index edge_count(Index rows, Index cols)
{
  return horizontal_edge_count(rows, cols) + vertical_edge_count(rows, cols);
}

inline bool edge_in_range(const EdgeIndex& e, Index rows, Index cols)
{
  if (e.row < 0 || e.col < 0 || e.row >= rows || e.col >= cols) return false;
  return e.orientation == Orientation::horizontal ? e.col + 1 < cols : e.row + 1 < rows;
}

/// Position of `e` in the canonical edge order.
inline Index edge_position(const EdgeIndex& e, Index rows, Index cols)
{
  if (!edge_in_range(e, rows, cols)) throw ShapeError("edge outside grid");
  if (e.orientation == Orientation::horizontal) return e.row * (cols - 1) + e.col;
  return horizontal_edge_count(rows, cols) + e.row * cols + e.col;
}

/// Inverse of edge_position.
inline EdgeIndex edge_at(Index position, Index rows, Index cols)
{
  if (position < 0 || position >= edge_count(rows, cols)) throw ShapeError("edge position out of range");
  const Index nh = horizontal_edge_count(rows, cols);
  if (position < nh) return {Orientation::horizontal, position / (cols - 1), position % (cols - 1)};
  position -= nh;
  return {Orientation::vertical, position / cols, position % cols};
}

/// theta(e+) - theta(e-).
template <typename Derived>
typename Derived::Scalar edge_gradient(const Eigen::MatrixBase<Derived>& theta, const EdgeIndex& e)
{
  if (!edge_in_range(e, theta.rows(), theta.cols())) throw ShapeError("edge outside grid");
  if (e.orientation == Orientation::horizontal) return theta(e.row, e.col + 1) - theta(e.row, e.col);
  return theta(e.row + 1, e.col) - theta(e.row, e.col);
}

// ---------------------------------------------------------------------------
// Total variation (unnormalized, anisotropic)

/// Sum of |differences| between horizontal neighbours.
template <typename Derived>
typename Derived::Scalar tv_rows(const Eigen::MatrixBase<Derived>& theta)
{
  const Index n = theta.cols();
  if (n < 2) return 0;
  return (theta.rightCols(n - 1) - theta.leftCols(n - 1)).cwiseAbs().sum();
}

/// Sum of |differences| between vertical neighbours.
template <typename Derived>
typename Derived::Scalar tv_cols(const Eigen::MatrixBase<Derived>& theta)
{
  const Index m = theta.rows();
  if (m < 2) return 0;
  return (theta.bottomRows(m - 1) - theta.topRows(m - 1)).cwiseAbs().sum();
}

template <typename Derived>
typename Derived::Scalar tv(const Eigen::MatrixBase<Derived>& theta)
{
  return tv_rows(theta) + tv_cols(theta);
}

/// tv(theta) / n. Defined for square matrices only.
template <typename Derived>
typename Derived::Scalar tv_norm(const Eigen::MatrixBase<Derived>& theta)
{
  if (theta.rows() != theta.cols()) throw ShapeError("tv_norm requires a square matrix");
  return tv(theta) / static_cast<typename Derived::Scalar>(theta.cols());
}

/// One-dimensional total variation of a vector.
template <typename Derived>
typename Derived::Scalar vector_tv(const Eigen::MatrixBase<Derived>& v)
{
  const Index k = v.size();
  if (k < 2) return 0;
  return (v.tail(k - 1) - v.head(k - 1)).cwiseAbs().sum();
}

/// Constant matrix with every entry equal to the mean of `theta`.
template <typename Derived>
Image<typename Derived::Scalar> mean_matrix(const Eigen::MatrixBase<Derived>& theta)
{
  return Image<typename Derived::Scalar>::Constant(theta.rows(), theta.cols(), theta.mean());
}

// ---------------------------------------------------------------------------
// Synthetic signals

enum class SignalKind { two, four, worst, custom };

struct GridSignal
{
  SignalKind kind = SignalKind::two;
  Index n = 2;
};

SignalKind parse_signal_kind(const std::string& name);
std::string to_string(SignalKind kind);

/// Indicator test matrices: two = I{j > n/2}, four = [[1, 2], [0, 1]] blocks,
/// worst = I{i + j > n}, all with 1-based (i, j).
ImageMatrix make_signal(const GridSignal& signal);

}  // namespace tvd
