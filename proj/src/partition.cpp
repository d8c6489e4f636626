#include "tvd/partition.hpp"

#include <algorithm>
#include <cmath>

namespace tvd {

void RectPartition::validate() const
{
  if (rows < 1 || cols < 1) throw ArgumentError("partition shape must be positive");
  std::vector<unsigned char> hit(static_cast<std::size_t>(rows * cols), 0);
  for (const Rect& r : rects) {
    if (r.row_lo < 0 || r.col_lo < 0 || r.row_hi < r.row_lo || r.col_hi < r.col_lo || r.row_hi >= rows ||
        r.col_hi >= cols)
      throw ArgumentError("partition rect out of range");
    for (Index i = r.row_lo; i <= r.row_hi; ++i)
      for (Index j = r.col_lo; j <= r.col_hi; ++j) {
        auto& h = hit[static_cast<std::size_t>(i * cols + j)];
        if (h) throw ArgumentError("partition rects overlap");
        h = 1;
      }
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) throw ArgumentError("partition does not cover the grid");
}

namespace {

void check_eps(double eps)
{
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("eps must be positive and finite");
}

void split_tv(const ImageMatrix& theta, const Rect& r, double eps, std::vector<Rect>& out)
{
  if (tv(submatrix(theta, r)) <= eps) {
    out.push_back(r);
    return;
  }
  // tv > 0 here, so at least one side exceeds 1
  const Index rmid = r.row_lo + (r.rows() + 1) / 2 - 1;
  const Index cmid = r.col_lo + (r.cols() + 1) / 2 - 1;
  const bool rsplit = r.rows() > 1;
  const bool csplit = r.cols() > 1;

  split_tv(theta, {r.row_lo, rmid, r.col_lo, cmid}, eps, out);
  if (csplit) split_tv(theta, {r.row_lo, rmid, cmid + 1, r.col_hi}, eps, out);
  if (rsplit) {
    split_tv(theta, {rmid + 1, r.row_hi, r.col_lo, cmid}, eps, out);
    if (csplit) split_tv(theta, {rmid + 1, r.row_hi, cmid + 1, r.col_hi}, eps, out);
  }
}

}  // namespace

RectPartition greedy_tv_partition(const ImageMatrix& theta, double eps)
{
  validate(theta);
  check_eps(eps);
  RectPartition p{theta.rows(), theta.cols(), {}};
  split_tv(theta, {0, theta.rows() - 1, 0, theta.cols() - 1}, eps, p.rects);
  return p;
}

std::vector<Segment> greedy_1d_partition(SegmentFunctional functional, const ImageMatrix& u, double eps)
{
  validate(u);
  check_eps(eps);

  Index length = 0;
  switch (functional) {
    case SegmentFunctional::tv_rows_of_columns: length = u.cols(); break;
    case SegmentFunctional::tv_cols_of_rows: length = u.rows(); break;
    case SegmentFunctional::vector_tv:
      if (u.rows() != 1 && u.cols() != 1) throw ShapeError("vector_tv needs a single row or column");
      length = u.size();
      break;
  }

  auto score = [&](const Segment& s) -> double {
    switch (functional) {
      case SegmentFunctional::tv_rows_of_columns: return tv_rows(u.middleCols(s.lo, s.size()));
      case SegmentFunctional::tv_cols_of_rows: return tv_cols(u.middleRows(s.lo, s.size()));
      case SegmentFunctional::vector_tv:
        return u.rows() == 1 ? vector_tv(u.row(0).segment(s.lo, s.size()))
                             : vector_tv(u.col(0).segment(s.lo, s.size()));
    }
    return 0.0;
  };

  std::vector<Segment> out;
  // explicit stack keeps left-to-right order: push right part first
  std::vector<Segment> stack{{0, length - 1}};
  while (!stack.empty()) {
    const Segment s = stack.back();
    stack.pop_back();
    if (s.size() == 1 || score(s) <= eps) {
      out.push_back(s);
      continue;
    }
    const Index first = s.size() / 2;
    stack.push_back({s.lo + first, s.hi});
    stack.push_back({s.lo, s.lo + first - 1});
  }
  return out;
}

ImageMatrix block_average(const ImageMatrix& theta, const RectPartition& partition)
{
  validate(theta);
  if (partition.rows != theta.rows() || partition.cols != theta.cols())
    throw ShapeError("partition shape does not match the matrix");
  partition.validate();
  ImageMatrix out(theta.rows(), theta.cols());
  for (const Rect& r : partition.rects) out.block(r.row_lo, r.col_lo, r.rows(), r.cols()).setConstant(submatrix(theta, r).mean());
  return out;
}

GnsBound gns_bound(const ImageMatrix& theta)
{
  validate(theta);
  const double m = static_cast<double>(theta.rows());
  const double n = static_cast<double>(theta.cols());
  const double short_side = std::min(m, n);
  const double t = tv(theta);
  return {(theta.array() - theta.mean()).square().sum(), (5.0 + 4.0 * m * n / (short_side * short_side)) * t * t};
}

double epsilon_net_eta(const ImageMatrix& theta, double eps)
{
  validate(theta);
  check_eps(eps);
  constexpr double C = 3.0;
  const double logn = std::max(1.0, std::log2(static_cast<double>(std::max(theta.rows(), theta.cols()))));
  const double t = tv(theta);
  const double by_norm = eps / std::sqrt(2.0 * C * logn);
  if (t == 0.0) return by_norm;
  return std::min(eps * eps / (2.0 * C * t * logn), by_norm);
}

ImageMatrix epsilon_net_representative(const ImageMatrix& theta, double eps, double L)
{
  validate(theta);
  check_eps(eps);
  if (!(L > 0.0) || !std::isfinite(L)) throw ArgumentError("L must be positive and finite");
  if (theta.cwiseAbs().maxCoeff() > L) throw ArgumentError("matrix entries exceed L in absolute value");

  double eta = epsilon_net_eta(theta, eps);
  ImageMatrix avg = block_average(theta, greedy_tv_partition(theta, eta));
  // Terminates: once eta is below every nonzero block tv, only constant blocks remain.
  while ((theta - avg).norm() > eps) {
    eta *= 0.5;
    avg = block_average(theta, greedy_tv_partition(theta, eta));
  }

  const double h = eps / std::sqrt(static_cast<double>(theta.size()));
  const double top = std::floor(2.0 * L / h);
  return avg.unaryExpr([&](double v) { return -L + h * std::clamp(std::round((v + L) / h), 0.0, top); });
}

}  // namespace tvd
