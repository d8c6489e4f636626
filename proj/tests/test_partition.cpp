#include "doctest.h"

#include "helpers.hpp"
#include "oracles.hpp"
#include "tvd/partition.hpp"

using namespace tvd;
using testing::random_matrix;

namespace {

double cardinality_bound(Index n, double t, double eps) { return 1.0 + 3.0 * std::log2(static_cast<double>(n)) * t / eps; }

// piecewise-constant matrix with random rectangles, so partitions are nontrivial
ImageMatrix blocky(Index m, Index n, std::mt19937_64& rng)
{
  ImageMatrix t = ImageMatrix::Zero(m, n);
  std::uniform_int_distribution<Index> r(0, m - 1), c(0, n - 1);
  std::normal_distribution<double> g;
  for (int k = 0; k < 6; ++k) {
    Index r0 = r(rng), r1 = r(rng), c0 = c(rng), c1 = c(rng);
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    t.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1).array() += g(rng);
  }
  return t;
}

}  // namespace

TEST_CASE("greedy tv partition: constant and four-block signals")
{
  const RectPartition one = greedy_tv_partition(ImageMatrix::Constant(8, 8, 2.0), 0.1);
  REQUIRE(one.rects.size() == 1);
  CHECK(one.rects[0] == Rect{0, 7, 0, 7});

  const RectPartition four = greedy_tv_partition(make_signal({SignalKind::four, 4}), 0.5);
  REQUIRE(four.rects.size() == 4);
  CHECK(four.rects[0] == Rect{0, 1, 0, 1});
  CHECK(four.rects[1] == Rect{0, 1, 2, 3});
  CHECK(four.rects[2] == Rect{2, 3, 0, 1});
  CHECK(four.rects[3] == Rect{2, 3, 2, 3});
}

TEST_CASE("greedy tv partition: blocks within tolerance, full coverage, odd shapes")
{
  std::mt19937_64 rng(41);
  for (auto [m, n] : {std::pair<Index, Index>{7, 5}, {1, 9}, {9, 1}, {13, 13}, {3, 16}}) {
    const ImageMatrix t = random_matrix(m, n, rng);
    const double eps = 0.2 * tv(t) + 1e-3;
    const RectPartition p = greedy_tv_partition(t, eps);
    CHECK_NOTHROW(p.validate());
    for (const Rect& r : p.rects) CHECK(tv(submatrix(t, r)) <= eps);
  }
  CHECK_THROWS_AS(greedy_tv_partition(ImageMatrix::Zero(2, 2), 0.0), ArgumentError);
}

TEST_CASE("greedy tv partition: split geometry of a 5 x 3 block")
{
  ImageMatrix t = ImageMatrix::Zero(5, 3);
  t(4, 2) = 1.0;
  const RectPartition p = greedy_tv_partition(t, 1.5);
  // first split: rows 0-2 / 3-4, cols 0-1 / 2
  REQUIRE(p.rects.size() >= 4);
  CHECK(p.rects[0] == Rect{0, 2, 0, 1});
  CHECK(p.rects[1] == Rect{0, 2, 2, 2});
  CHECK(p.rects[2] == Rect{3, 4, 0, 1});
}

TEST_CASE("greedy tv partition: cardinality bound on random inputs")
{
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> frac(0.02, 0.5);
  int checked = 0;
  for (Index n : {16, 32})
    for (int trial = 0; trial < 50; ++trial) {
      const ImageMatrix t = trial % 2 ? random_matrix(n, n, rng) : blocky(n, n, rng);
      const double eps = frac(rng) * tv(t);
      const RectPartition p = greedy_tv_partition(t, eps);
      CHECK(static_cast<double>(p.rects.size()) <= cardinality_bound(n, tv(t), eps));
      ++checked;
    }
  CHECK(checked == 100);

  const ImageMatrix t = random_matrix(16, 16, rng);
  CHECK(static_cast<double>(greedy_tv_partition(t, tv(t) / 10).rects.size()) <= 121.0);
}

TEST_CASE("greedy tv partition is deterministic")
{
  std::mt19937_64 rng(43);
  const ImageMatrix t = random_matrix(20, 20, rng);
  const auto a = greedy_tv_partition(t, 3.0);
  const auto b = greedy_tv_partition(t, 3.0);
  CHECK(a.rects == b.rects);
}

TEST_CASE("binary scheme on vectors")
{
  CHECK(greedy_1d_partition(SegmentFunctional::vector_tv, ImageMatrix::Constant(1, 9, 1.0), 0.1).size() == 1);

  ImageMatrix v(1, 4);
  v << 0, 1, 0, 1;
  const auto s = greedy_1d_partition(SegmentFunctional::vector_tv, v, 0.5);
  REQUIRE(s.size() == 4);
  for (Index k = 0; k < 4; ++k) CHECK(s[static_cast<std::size_t>(k)] == Segment{k, k});
  CHECK(s.size() <= 28);

  // uneven halves: 5 -> 2 + 3
  ImageMatrix u(5, 1);
  u << 0, 0, 0, 0, 9;
  const auto t = greedy_1d_partition(SegmentFunctional::vector_tv, u, 1.0);
  // [0 0 | 0 0 9] then [0 | 0 9] then [0 | 9]
  REQUIRE(t.size() == 4);
  CHECK(t[0] == Segment{0, 1});
  CHECK(t[1] == Segment{2, 2});
  CHECK(t[2] == Segment{3, 3});
  CHECK(t[3] == Segment{4, 4});

  CHECK_THROWS_AS(greedy_1d_partition(SegmentFunctional::vector_tv, ImageMatrix::Zero(2, 2), 1.0), ShapeError);
}

TEST_CASE("binary scheme: block bound on random inputs")
{
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const ImageMatrix v = random_matrix(1, 32, rng);
    const double t = vector_tv(v.row(0));
    const double eps = trial == 0 ? t / 4 : t * (0.02 + 0.01 * trial);
    const auto s = greedy_1d_partition(SegmentFunctional::vector_tv, v, eps);
    CHECK(static_cast<double>(s.size()) <= std::log2(128.0) * (1.0 + t / eps));
    for (const auto& b : s) CHECK(vector_tv(v.row(0).segment(b.lo, b.size())) <= eps);
  }
}

TEST_CASE("binary scheme on rows and columns of a matrix")
{
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const ImageMatrix u = random_matrix(12, 9, rng);

    const double tc = tv_cols(u);
    const double ec = tc * (0.05 + 0.02 * trial);
    const auto rows = greedy_1d_partition(SegmentFunctional::tv_cols_of_rows, u, ec);
    Index next = 0;
    for (const auto& b : rows) {
      CHECK(b.lo == next);
      next = b.hi + 1;
      // direct oracle: vertical differences inside the row group
      double s = 0.0;
      for (Index i = b.lo; i < b.hi; ++i) s += (u.row(i + 1) - u.row(i)).cwiseAbs().sum();
      CHECK(s <= ec);
    }
    CHECK(next == 12);
    CHECK(static_cast<double>(rows.size()) <= std::log2(48.0) * (1.0 + tc / ec));

    const double tr = tv_rows(u);
    const double er = tr * (0.05 + 0.02 * trial);
    const auto cols = greedy_1d_partition(SegmentFunctional::tv_rows_of_columns, u, er);
    next = 0;
    for (const auto& b : cols) {
      CHECK(b.lo == next);
      next = b.hi + 1;
      double s = 0.0;
      for (Index j = b.lo; j < b.hi; ++j) s += (u.col(j + 1) - u.col(j)).cwiseAbs().sum();
      CHECK(s <= er);
    }
    CHECK(next == 9);
    CHECK(static_cast<double>(cols.size()) <= std::log2(36.0) * (1.0 + tr / er));
  }
}

TEST_CASE("block_average")
{
  std::mt19937_64 rng(46);
  const ImageMatrix t = random_matrix(4, 6, rng);
  CHECK((block_average(t, {4, 6, {{0, 3, 0, 5}}}) - mean_matrix(t)).cwiseAbs().maxCoeff() < 1e-15);

  RectPartition cells{4, 6, {}};
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 6; ++j) cells.rects.push_back({i, i, j, j});
  CHECK(block_average(t, cells) == t);

  const ImageMatrix four = make_signal({SignalKind::four, 6});
  CHECK(block_average(four, {6, 6, {{0, 2, 0, 2}, {0, 2, 3, 5}, {3, 5, 0, 2}, {3, 5, 3, 5}}}) == four);

  CHECK_THROWS_AS(block_average(t, {4, 5, {{0, 3, 0, 4}}}), ArgumentError);
  CHECK_THROWS_AS(block_average(t, {4, 6, {{0, 3, 0, 4}}}), ArgumentError);
  CHECK_THROWS_AS(block_average(t, {4, 6, {{0, 3, 0, 5}, {0, 0, 0, 0}}}), ArgumentError);
}

TEST_CASE("block_average error obeys the per-block GNS bound")
{
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    const Index m = 4 + trial % 13;
    const Index n = 4 + (trial * 7) % 11;
    const ImageMatrix t = trial % 2 ? random_matrix(m, n, rng) : blocky(m, n, rng);
    const RectPartition p = greedy_tv_partition(t, tv(t) * (0.03 + 0.01 * (trial % 10)));
    const ImageMatrix avg = block_average(t, p);
    double bound = 0.0;
    for (const Rect& r : p.rects) bound += gns_bound(submatrix(t, r).eval()).rhs;
    CHECK((t - avg).squaredNorm() <= bound + 1e-12);
  }
}

TEST_CASE("block_average over greedy partitions of a single row or column does not raise tv")
{
  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 100; ++trial) {
    const Index k = 2 + trial % 40;
    const ImageMatrix t = trial % 2 ? random_matrix(1, k, rng) : blocky(k, 1, rng);
    const ImageMatrix avg = block_average(t, greedy_tv_partition(t, tv(t) * (0.02 + 0.01 * (trial % 30))));
    CHECK(tv(avg) <= tv(t) + 1e-9);
  }
}

TEST_CASE("block_average over a greedy 2D partition can raise tv")
{
  ImageMatrix t(3, 3);
  t << -1, 4, 4, -3, -3, 0, 0, 1, -3;
  REQUIRE(tv(t) == 36.0);
  const RectPartition p = greedy_tv_partition(t, 10.8);
  ImageMatrix expect(3, 3);
  expect << -1, 4, 2, -3, -3, 2, 0.5, 0.5, -3;
  const ImageMatrix avg = block_average(t, p);
  CHECK((avg - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(tv(avg) == doctest::Approx(36.5));
}

TEST_CASE("GNS bound")
{
  const GnsBound flat = gns_bound(ImageMatrix::Constant(3, 3, 1.0));
  CHECK(flat.lhs == 0.0);
  CHECK(flat.rhs == 0.0);

  ImageMatrix row(1, 2);
  row << 0, 1;
  const GnsBound r = gns_bound(row);
  CHECK(r.lhs == doctest::Approx(0.5));
  CHECK(r.rhs == doctest::Approx(13.0));

  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 100; ++trial) {
    const ImageMatrix t = random_matrix(8, 8, rng);
    const GnsBound b = gns_bound(t);
    CHECK(b.rhs == doctest::Approx(9.0 * tv(t) * tv(t)).epsilon(1e-14));
    CHECK(b.lhs <= b.rhs);
  }
}

TEST_CASE("epsilon-net representative")
{
  // L = 1, eps = 0.5, 4 x 4: grid spacing 0.125
  const ImageMatrix on_grid = ImageMatrix::Constant(4, 4, 0.25);
  CHECK(epsilon_net_representative(on_grid, 0.5, 1.0) == on_grid);

  const ImageMatrix off_grid = ImageMatrix::Constant(4, 4, 0.3);
  const ImageMatrix q = epsilon_net_representative(off_grid, 0.5, 1.0);
  CHECK(tv(q) == 0.0);
  CHECK(std::abs(q(0, 0) - 0.3) <= 0.5 / 4);

  CHECK_THROWS_AS(epsilon_net_representative(off_grid, 0.5, 0.2), ArgumentError);
  CHECK_THROWS_AS(epsilon_net_representative(off_grid, 0.0, 1.0), ArgumentError);

  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 100; ++trial) {
    const ImageMatrix t = trial % 2 ? random_matrix(16, 16, rng) : blocky(16, 16, rng);
    const double L = t.cwiseAbs().maxCoeff();
    const ImageMatrix out = epsilon_net_representative(t, 0.5, L);
    CHECK((t - out).norm() <= 1.0);
    CHECK(out.cwiseAbs().maxCoeff() <= L + 1e-12);
  }
}

TEST_CASE("epsilon-net block tolerance formula")
{
  const ImageMatrix t = make_signal({SignalKind::two, 16});
  // tv = 16, log2 16 = 4, C = 3
  CHECK(epsilon_net_eta(t, 1.0) == doctest::Approx(std::min(1.0 / (6.0 * 16 * 4), 1.0 / std::sqrt(24.0))));
  CHECK(epsilon_net_eta(ImageMatrix::Zero(16, 16), 1.0) == doctest::Approx(1.0 / std::sqrt(24.0)));
}
