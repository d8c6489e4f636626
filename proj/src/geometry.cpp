#include "tvd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "tvd/parallel.hpp"
#include "tvd/random.hpp"

namespace tvd {

double default_edge_tol(const ImageMatrix& base)
{
  validate(base);
  return 1e-9 * std::max(1.0, base.cwiseAbs().maxCoeff());
}

SignPattern sign_pattern(const ImageMatrix& base, double edge_tol)
{
  validate(base);
  if (!(edge_tol >= 0.0) || !std::isfinite(edge_tol)) throw ArgumentError("edge_tol must be finite and nonnegative");
  SignPattern sp{base, edge_tol, {}};
  const Index total = edge_count(base.rows(), base.cols());
  for (Index k = 0; k < total; ++k) {
    const EdgeIndex e = edge_at(k, base.rows(), base.cols());
    const double g = edge_gradient(base, e);
    if (std::abs(g) > edge_tol) sp.active.push_back({e, g > 0.0 ? 1 : -1});
  }
  return sp;
}

ImageMatrix SignPattern::horizontal_signs() const
{
  ImageMatrix s = ImageMatrix::Zero(rows(), std::max<Index>(cols() - 1, 0));
  for (const auto& a : active)
    if (a.edge.orientation == Orientation::horizontal) s(a.edge.row, a.edge.col) = a.sign;
  return s;
}

ImageMatrix SignPattern::vertical_signs() const
{
  ImageMatrix s = ImageMatrix::Zero(std::max<Index>(rows() - 1, 0), cols());
  for (const auto& a : active)
    if (a.edge.orientation == Orientation::vertical) s(a.edge.row, a.edge.col) = a.sign;
  return s;
}

namespace {

void check_shape(const SignPattern& sp, const ImageMatrix& theta)
{
  validate(theta);
  if (theta.rows() != sp.rows() || theta.cols() != sp.cols())
    throw ShapeError("matrix shape does not match the sign pattern");
}

// h from precomputed sign layouts; zero entries mark zero edges
double constraint(const ImageMatrix& sh, const ImageMatrix& sv, const ImageMatrix& theta)
{
  const Index m = theta.rows();
  const Index n = theta.cols();
  double h = 0.0;
  if (n > 1) {
    const ImageMatrix g = theta.rightCols(n - 1) - theta.leftCols(n - 1);
    h += (sh.array() == 0.0).select(g.array().abs(), sh.array() * g.array()).sum();
  }
  if (m > 1) {
    const ImageMatrix g = theta.bottomRows(m - 1) - theta.topRows(m - 1);
    h += (sv.array() == 0.0).select(g.array().abs(), sv.array() * g.array()).sum();
  }
  return h;
}

// D^T applied to edge values laid out like EdgeWeights
ImageMatrix adjoint(const ImageMatrix& ph, const ImageMatrix& pv, Index m, Index n)
{
  ImageMatrix out = ImageMatrix::Zero(m, n);
  if (n > 1) {
    out.leftCols(n - 1) -= ph;
    out.rightCols(n - 1) += ph;
  }
  if (m > 1) {
    out.topRows(m - 1) -= pv;
    out.bottomRows(m - 1) += pv;
  }
  return out;
}

}  // namespace

double cone_constraint(const SignPattern& sp, const ImageMatrix& theta)
{
  check_shape(sp, theta);
  return constraint(sp.horizontal_signs(), sp.vertical_signs(), theta);
}

Membership cone_membership(const SignPattern& sp, const ImageMatrix& theta)
{
  const double slack = -cone_constraint(sp, theta);
  return {slack >= -1e-9 * std::max(1.0, tv(theta)), slack};
}

ImageMatrix project_onto_cone(const SignPattern& sp, const ImageMatrix& z, const SolverConfig& cfg)
{
  check_shape(sp, z);
  cfg.validate();
  const Index m = z.rows();
  const Index n = z.cols();
  const ImageMatrix sh = sp.horizontal_signs();
  const ImageMatrix sv = sp.vertical_signs();

  if (constraint(sh, sv, z) <= 0.0) return z;
  // no active edge: the cone is the line of constant matrices
  if (sp.active.empty()) return mean_matrix(z);

  const double side = static_cast<double>(std::max(m, n));
  const double tol = 1e-6 * side * side;
  const ImageMatrix shift = adjoint(sh, sv, m, n);  // D_A^T s
  const ImageMatrix zero_h = (sh.array() == 0.0).cast<double>();
  const ImageMatrix zero_v = (sv.array() == 0.0).cast<double>();

  TvProx prox(z, cfg);
  double last_mu = 0.0;
  auto solve = [&](double mu) {
    prox.set_data(z - mu * shift);
    if (last_mu > 0.0) prox.scale_warm_start(mu / last_mu);
    last_mu = mu;
    ImageMatrix theta = prox.solve({mu * zero_h, mu * zero_v});
    return std::make_pair(std::move(theta), constraint(sh, sv, theta));
  };

  // bracket: h(0) > 0; double until h <= 0
  double lo = 0.0;
  double hi = 1.0;
  std::pair<ImageMatrix, double> at_hi = solve(hi);
  int steps = 1;
  while (at_hi.second > 0.0) {
    if (steps >= cfg.max_bisect) throw ConvergenceError("project_onto_cone: no feasible multiplier found", at_hi.first);
    lo = hi;
    hi *= 2.0;
    at_hi = solve(hi);
    ++steps;
  }
  if (at_hi.second >= -tol) return std::move(at_hi.first);

  for (int k = 0; k < cfg.max_bisect; ++k) {
    const double mid = 0.5 * (lo + hi);
    auto at_mid = solve(mid);
    if (at_mid.second > 0.0) {
      lo = mid;
    } else {
      if (at_mid.second >= -tol) return std::move(at_mid.first);
      hi = mid;
      at_hi = std::move(at_mid);
    }
    if (hi - lo <= 1e-15 * hi) break;
  }

  // Fallback: sweep mu upward on a geometric grid over the last bracket and
  // keep the first feasible point closest to the boundary.
  std::optional<ImageMatrix> best;
  double best_h = -std::numeric_limits<double>::infinity();
  const double start = lo > 0.0 ? lo : hi * 1e-6;
  prox.reset();
  last_mu = 0.0;
  for (int k = 0; k <= 64; ++k) {
    const double mu = start * std::pow(hi / start, k / 64.0);
    auto at = solve(mu);
    if (at.second <= 0.0 && at.second > best_h) {
      best_h = at.second;
      best = std::move(at.first);
      if (best_h >= -tol) return std::move(*best);
    }
  }
  throw ConvergenceError("project_onto_cone: multiplier search ended " + std::to_string(-best_h) +
                             " inside the boundary (tolerance " + std::to_string(tol) + ")",
                         best ? *best : at_hi.first);
}

WidthEstimate gaussian_width_cone(const SignPattern& sp, int samples, std::uint64_t seed, const SolverConfig& cfg,
                                  unsigned threads)
{
  if (samples < 2) throw ArgumentError("gaussian_width_cone needs at least 2 samples");
  validate(sp.base);
  cfg.validate();

  std::vector<double> norms(static_cast<std::size_t>(samples), 0.0);
  std::vector<unsigned char> ok(static_cast<std::size_t>(samples), 0);
  parallel_for(norms.size(), threads, [&](std::size_t k) {
    Rng rng(stream_seed(seed, k));
    const ImageMatrix z = standard_normal(sp.rows(), sp.cols(), rng);
    try {
      norms[k] = project_onto_cone(sp, z, cfg).norm();
      ok[k] = 1;
    } catch (const ConvergenceError&) {
    }
  });

  WidthEstimate w;
  double sum = 0.0;
  for (std::size_t k = 0; k < norms.size(); ++k)
    if (ok[k]) {
      sum += norms[k];
      ++w.samples;
    }
  w.failures = samples - w.samples;
  if (w.failures * 100 > samples)
    throw ConvergenceError("gaussian_width_cone: " + std::to_string(w.failures) + " of " + std::to_string(samples) +
                               " projections failed",
                           ImageMatrix());
  if (w.samples < 2) throw ConvergenceError("gaussian_width_cone: fewer than 2 successful samples", ImageMatrix());
  w.mean = sum / w.samples;
  double ss = 0.0;
  for (std::size_t k = 0; k < norms.size(); ++k)
    if (ok[k]) ss += (norms[k] - w.mean) * (norms[k] - w.mean);
  w.std_error = std::sqrt(ss / (w.samples - 1)) / std::sqrt(static_cast<double>(w.samples));
  return w;
}

ImageMatrix lower_bound_witness(const ImageMatrix& z, double c1)
{
  validate(z);
  if (z.rows() != z.cols()) throw ShapeError("lower_bound_witness needs a square matrix");
  if (!(c1 > 0.0 && c1 < 1.0)) throw ArgumentError("c1 must lie in (0, 1)");
  const Index n = z.rows();
  const Index root = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n % 2 != 0 || root * root != n) throw ArgumentError("lower_bound_witness needs n even and a perfect square");

  const double dn = static_cast<double>(n);
  const double c2 = std::min(c1, std::sqrt(1.0 - c1 * c1));
  const Index mid = n / 2 - 1;

  ImageMatrix nu = ImageMatrix::Zero(n, n);
  nu.leftCols(mid).setConstant(c1 / dn);
  for (Index b = 0; b < root; ++b) {
    const double s = z.col(mid).segment(b * root, root).sum();
    nu.col(mid).segment(b * root, root).setConstant(s > 0.0 ? c2 / std::sqrt(dn) : c1 / dn);
  }
  return nu;
}

}  // namespace tvd
