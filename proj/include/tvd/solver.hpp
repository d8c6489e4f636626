#pragma once

#include <optional>

#include "tvd/core.hpp"

namespace tvd {

/// Inner engine for the weighted TV proximal problem.
enum class ProxEngine {
  /// Block-coordinate ascent on the dual, alternating exact 1D fused-lasso
  /// solves over all rows and all columns (proximal Dykstra).
  dykstra,
  /// First-order primal-dual iteration with steps 1/sqrt(8).
  primal_dual,
};

struct SolverConfig
{
  int max_iters = 20000;  ///< iteration cap per penalized solve
  /// stop when ||theta_k+1 - theta_k|| <= rel_tol * max(||theta_k+1||, ||data||)
  double rel_tol = 1e-7;
  double bisect_tol = 1e-4;  ///< relative target accuracy of every bisection
  int max_bisect = 60;
  ProxEngine engine = ProxEngine::dykstra;

  /// Throws ArgumentError on non-positive tolerances or caps.
  void validate() const;
};

struct DenoiseResult
{
  ImageMatrix estimate;
  double achieved_tv = 0.0;
  double residual_norm2 = 0.0;  ///< ||y - estimate||^2
  int iterations = 0;
  bool converged = true;
};

/// Per-edge weights for  1/2 ||data - theta||^2 + sum_e w_e |grad_e theta|.
/// `horizontal` is rows x (cols - 1), `vertical` is (rows - 1) x cols, both
/// laid out like the edges they weigh. Weights must be nonnegative.
struct EdgeWeights
{
  ImageMatrix horizontal;
  ImageMatrix vertical;

  static EdgeWeights uniform(Index rows, Index cols, double w);
};

/// Solver for the weighted anisotropic TV proximal problem
///
///   min_theta  1/2 ||data - theta||^2 + sum_e w_e |grad_e theta|
///
/// Its dual is  min_{|p_e| <= w_e} 1/2 ||data - D^T p||^2. The default engine
/// splits p into its horizontal and vertical blocks and minimizes exactly
/// over each in turn; each block step is an independent 1D fused lasso per
/// row (resp. column). The primal-dual engine iterates on the saddle form
/// min_theta max_{|p_e| <= w_e} <D theta, p> + 1/2 ||data - theta||^2 with
/// both steps 1/sqrt(8), using ||D||^2 <= 8 on the grid.
///
/// Dual state is kept between calls so that a sequence of nearby problems
/// (a bisection over the penalty) warm-starts.
class TvProx
{
public:
  TvProx(ImageMatrix data, SolverConfig cfg);

  const ImageMatrix& data() const { return data_; }
  void set_data(ImageMatrix data);

  /// Runs until the relative iterate change drops below rel_tol or max_iters.
  /// `iterations` and `converged` of the last solve are available afterwards.
  const ImageMatrix& solve(const EdgeWeights& weights);

  int iterations() const { return iterations_; }
  bool converged() const { return converged_; }

  /// Forget the warm start.
  void reset();

  /// Rescale the warm-start duals, e.g. by new/old penalty when all weights
  /// change by one factor.
  void scale_warm_start(double factor);

private:
  void solve_dykstra(const EdgeWeights& weights);
  void solve_primal_dual(const EdgeWeights& weights);

  ImageMatrix data_;
  SolverConfig cfg_;
  ImageMatrix theta_;
  // primal-dual engine: edge duals
  ImageMatrix dual_h_;
  ImageMatrix dual_v_;
  // dykstra engine: D_v^T p_v, the vertical block's contribution to data - theta
  ImageMatrix col_part_;
  int iterations_ = 0;
  bool converged_ = true;
};

/// Minimizes ||y - theta||^2 + lambda * tv(theta) by repeated solves of one
/// warm-started TvProx. lambda here multiplies the unnormalized tv.
class PenalizedPath
{
public:
  PenalizedPath(const ImageMatrix& y, SolverConfig cfg);

  DenoiseResult solve(double lambda);

  /// Smallest penalty known to force the constant solution mean(y) * 1.
  double constant_threshold() const { return constant_threshold_; }

private:
  ImageMatrix y_;
  SolverConfig cfg_;
  double constant_threshold_ = 0.0;
  double last_lambda_ = 0.0;
  TvProx prox_;
};

/// Which way a monotone score moves as the penalty grows.
enum class Trend { nonincreasing, nondecreasing };

/// Bracketed search along a penalized path for a penalty whose solution has
/// |score(result) - target| <= tol. The score must be monotone in lambda with
/// the given trend, and must already have crossed the target by the path's
/// constant threshold. Brackets by halving down from that threshold, then
/// refines with Brent's method on log(lambda). Every penalized
/// solve counts toward cfg.max_bisect. Throws ConvergenceError with the
/// closest iterate when the budget runs out.
template <typename Score>
DenoiseResult search_penalty(PenalizedPath& path, Score&& score, double target, double tol, Trend trend,
                             const SolverConfig& cfg, const char* caller);

/// Penalized estimator: approximately minimizes ||y - theta||^2 + lambda * tv(theta).
/// For a square n x n input and a normalized penalty L, pass lambda = L / n.
DenoiseResult denoise_penalized(const ImageMatrix& y, double lambda, const SolverConfig& cfg = {});

/// Constrained estimator: Euclidean projection of y onto {theta : tv(theta) <= budget},
/// found by bisection over the penalty of the penalized estimator.
/// Throws ConvergenceError if the bisection does not meet bisect_tol.
DenoiseResult project_tv_ball(const ImageMatrix& y, double budget, const SolverConfig& cfg = {});

}  // namespace tvd

#include "tvd/solver.ipp"
