#include "tvd/solver.hpp"

#include "tvd/fused_lasso.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tvd {

namespace {

// tau = sigma = 1/sqrt(8) satisfies tau * sigma * ||D||^2 <= 1.
const double kStep = 1.0 / std::sqrt(8.0);

DenoiseResult make_result(const ImageMatrix& y, ImageMatrix estimate, int iterations, bool converged)
{
  DenoiseResult r;
  r.achieved_tv = tv(estimate);
  r.residual_norm2 = (y - estimate).squaredNorm();
  r.estimate = std::move(estimate);
  r.iterations = iterations;
  r.converged = converged;
  return r;
}

}  // namespace

void SolverConfig::validate() const
{
  if (max_iters < 1) throw ArgumentError("max_iters must be at least 1");
  if (!(rel_tol > 0.0)) throw ArgumentError("rel_tol must be positive");
  if (!(bisect_tol > 0.0)) throw ArgumentError("bisect_tol must be positive");
  if (max_bisect < 1) throw ArgumentError("max_bisect must be at least 1");
}

EdgeWeights EdgeWeights::uniform(Index rows, Index cols, double w)
{
  return {ImageMatrix::Constant(rows, std::max<Index>(cols - 1, 0), w),
          ImageMatrix::Constant(std::max<Index>(rows - 1, 0), cols, w)};
}

// ---------------------------------------------------------------------------

TvProx::TvProx(ImageMatrix data, SolverConfig cfg) : data_(std::move(data)), cfg_(cfg)
{
  cfg_.validate();
  validate(data_);
  reset();
}

void TvProx::set_data(ImageMatrix data)
{
  if (data.rows() != data_.rows() || data.cols() != data_.cols())
    throw ShapeError("TvProx::set_data: shape changed");
  validate(data);
  data_ = std::move(data);
}

void TvProx::reset()
{
  const Index m = data_.rows();
  const Index n = data_.cols();
  theta_ = data_;
  dual_h_ = ImageMatrix::Zero(m, std::max<Index>(n - 1, 0));
  dual_v_ = ImageMatrix::Zero(std::max<Index>(m - 1, 0), n);
  col_part_ = ImageMatrix::Zero(m, n);
}

void TvProx::scale_warm_start(double factor)
{
  dual_h_ *= factor;
  dual_v_ *= factor;
  col_part_ *= factor;
}

const ImageMatrix& TvProx::solve(const EdgeWeights& weights)
{
  if (weights.horizontal.rows() != dual_h_.rows() || weights.horizontal.cols() != dual_h_.cols() ||
      weights.vertical.rows() != dual_v_.rows() || weights.vertical.cols() != dual_v_.cols())
    throw ShapeError("edge weights do not match the data shape");
  if ((weights.horizontal.array() < 0.0).any() || (weights.vertical.array() < 0.0).any())
    throw ArgumentError("edge weights must be nonnegative");

  if (cfg_.engine == ProxEngine::dykstra)
    solve_dykstra(weights);
  else
    solve_primal_dual(weights);
  return theta_;
}

void TvProx::solve_dykstra(const EdgeWeights& weights)
{
  const Index m = data_.rows();
  const Index n = data_.cols();
  FusedLasso1D fused;
  ImageMatrix rows_in(m, n);
  ImageMatrix rows_out(m, n);
  ImageMatrix next(m, n);
  ImageMatrix col_prev = col_part_;
  ImageMatrix col_bar = col_part_;
  double momentum = 1.0;
  const double data_norm = data_.norm();

  iterations_ = 0;
  converged_ = false;
  for (int it = 0; it < cfg_.max_iters; ++it) {
    // exact minimization over the horizontal duals: one fused lasso per row
    rows_in = data_ - col_bar;
    for (Index i = 0; i < m; ++i)
      fused.solve(rows_in.row(i).transpose(), weights.horizontal.row(i).transpose(), rows_out.row(i).transpose());

    // then over the vertical duals, one fused lasso per column
    rows_in = rows_out + col_bar;
    for (Index j = 0; j < n; ++j) fused.solve(rows_in.col(j), weights.vertical.col(j), next.col(j));
    col_prev.swap(col_part_);
    col_part_ = rows_in - next;

    // The two block steps are a proximal gradient step on the vertical dual
    // alone, so Nesterov extrapolation applies; restart when it stops helping.
    const double restart = (col_bar - col_part_).cwiseProduct(col_part_ - col_prev).sum();
    if (restart > 0.0) momentum = 1.0;
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    col_bar = col_part_ + ((momentum - 1.0) / next_momentum) * (col_part_ - col_prev);
    momentum = next_momentum;

    const double change = (next - theta_).norm();
    theta_.swap(next);
    iterations_ = it + 1;
    if (change <= cfg_.rel_tol * std::max(theta_.norm(), data_norm)) {
      converged_ = true;
      break;
    }
  }
}

void TvProx::solve_primal_dual(const EdgeWeights& weights)
{
  const Index m = data_.rows();
  const Index n = data_.cols();

  auto ph = dual_h_.array();
  auto pv = dual_v_.array();
  const auto wh = weights.horizontal.array();
  const auto wv = weights.vertical.array();
  ph = ph.max(-wh).min(wh);
  pv = pv.max(-wv).min(wv);

  const double tau = kStep;
  const double sigma = kStep;
  const double inv = 1.0 / (1.0 + tau);

  const double data_norm = data_.norm();
  ImageMatrix bar = theta_;
  ImageMatrix adj(m, n);
  ImageMatrix next(m, n);

  iterations_ = 0;
  converged_ = false;
  for (int it = 0; it < cfg_.max_iters; ++it) {
    // dual ascent at the extrapolated point, then clip to the weight box
    if (n > 1) {
      ph += sigma * (bar.rightCols(n - 1) - bar.leftCols(n - 1)).array();
      ph = ph.max(-wh).min(wh);
    }
    if (m > 1) {
      pv += sigma * (bar.bottomRows(m - 1) - bar.topRows(m - 1)).array();
      pv = pv.max(-wv).min(wv);
    }

    // adj = D^T p
    adj.setZero();
    if (n > 1) {
      adj.leftCols(n - 1) -= dual_h_;
      adj.rightCols(n - 1) += dual_h_;
    }
    if (m > 1) {
      adj.topRows(m - 1) -= dual_v_;
      adj.bottomRows(m - 1) += dual_v_;
    }

    next = (theta_ - tau * adj + tau * data_) * inv;
    const double change = (next - theta_).norm();
    bar = 2.0 * next - theta_;
    theta_.swap(next);
    iterations_ = it + 1;

    if (change <= cfg_.rel_tol * std::max(theta_.norm(), data_norm)) {
      converged_ = true;
      break;
    }
  }
}

// ---------------------------------------------------------------------------

PenalizedPath::PenalizedPath(const ImageMatrix& y, SolverConfig cfg) : y_(y), cfg_(cfg), prox_(y, cfg)
{
  // Routing the imbalance y - mean(y) along a spanning tree needs a flow of at
  // most half its l1 norm on any edge, so with lambda / 2 at least that large the
  // constant matrix is optimal.
  constant_threshold_ = (y_.array() - y_.mean()).abs().sum();
}

DenoiseResult PenalizedPath::solve(double lambda)
{
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ArgumentError("penalty must be a finite nonnegative number");
  if (lambda == 0.0 || y_.size() == 1) return make_result(y_, y_, 0, true);
  if (lambda >= constant_threshold_) return make_result(y_, mean_matrix(y_), 0, true);

  // ||y - theta||^2 + lambda tv  ==  2 * (1/2 ||y - theta||^2 + lambda/2 tv)
  const auto weights = EdgeWeights::uniform(y_.rows(), y_.cols(), 0.5 * lambda);
  if (last_lambda_ > 0.0) prox_.scale_warm_start(lambda / last_lambda_);
  last_lambda_ = lambda;
  ImageMatrix estimate = prox_.solve(weights);
  return make_result(y_, std::move(estimate), prox_.iterations(), prox_.converged());
}

DenoiseResult denoise_penalized(const ImageMatrix& y, double lambda, const SolverConfig& cfg)
{
  validate(y);
  cfg.validate();
  PenalizedPath path(y, cfg);
  return path.solve(lambda);
}

DenoiseResult project_tv_ball(const ImageMatrix& y, double budget, const SolverConfig& cfg)
{
  validate(y);
  cfg.validate();
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw ArgumentError("TV budget must be a finite nonnegative number");

  if (y.size() == 1 || tv(y) <= budget) return make_result(y, y, 0, true);
  if (budget == 0.0) return make_result(y, mean_matrix(y), 0, true);

  const double tol = cfg.bisect_tol * std::max(budget, 1.0);
  PenalizedPath path(y, cfg);
  return search_penalty(
      path, [](const DenoiseResult& r) { return r.achieved_tv; }, budget, tol, Trend::nonincreasing, cfg,
      "project_tv_ball");
}

}  // namespace tvd
