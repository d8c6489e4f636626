#pragma once

#include "tvd/solver.hpp"

namespace tvd {

struct TuningFreeResult
{
  ImageMatrix estimate;
  double sigma_hat = 0.0;
  double radius2 = 0.0;  ///< (n^2 - 1) * sigma_hat^2
  bool on_boundary = false;
  double centered_solution_tv = 0.0;  ///< tv of the centered solution w_hat
  int iterations = 0;
};

/// Noise level estimate sqrt(pi) * tv(y) / (4 n (n - 1)), calibrated so that it
/// is unbiased for y = sigma * Z with Z standard Gaussian. y must be n x n, n >= 2.
double sigma_hat(const ImageMatrix& y);

/// Tuning-free estimator. With w = y - mean(y) and r^2 = (n^2 - 1) sigma_hat^2,
/// finds the minimum-tv w_hat with ||w - w_hat||^2 <= r^2 and returns
/// w_hat + mean(y). When the zero matrix is feasible w_hat = 0. Otherwise
/// w_hat lies on the sphere and is located on the penalized path of w by
/// matching the residual to r^2 within bisect_tol relative.
///
/// sigma_hat = 0 happens only for constant y, where the estimate is y itself.
TuningFreeResult denoise_notuning(const ImageMatrix& y, const SolverConfig& cfg = {});

}  // namespace tvd
