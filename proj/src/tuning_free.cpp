#include "tvd/tuning_free.hpp"

#include <cmath>
#include <numbers>

namespace tvd {

namespace {

void require_square(const ImageMatrix& y, const char* caller)
{
  validate(y);
  if (y.rows() != y.cols()) throw ShapeError(std::string(caller) + ": input must be square");
  if (y.rows() < 2) throw ArgumentError(std::string(caller) + ": side length must be at least 2");
}

}  // namespace

double sigma_hat(const ImageMatrix& y)
{
  require_square(y, "sigma_hat");
  const double n = static_cast<double>(y.rows());
  return std::sqrt(std::numbers::pi) * tv(y) / (4.0 * n * (n - 1.0));
}

TuningFreeResult denoise_notuning(const ImageMatrix& y, const SolverConfig& cfg)
{
  require_square(y, "denoise_notuning");
  cfg.validate();

  const double n = static_cast<double>(y.rows());
  const double ybar = y.mean();

  TuningFreeResult out;
  out.sigma_hat = sigma_hat(y);
  out.radius2 = (n * n - 1.0) * out.sigma_hat * out.sigma_hat;

  if (out.sigma_hat == 0.0) {
    out.estimate = y;
    return out;
  }

  const ImageMatrix w = y.array() - ybar;
  if (w.squaredNorm() <= out.radius2) {
    out.estimate = ImageMatrix::Constant(y.rows(), y.cols(), ybar);
    return out;
  }

  const double tol = cfg.bisect_tol * out.radius2;
  PenalizedPath path(w, cfg);
  DenoiseResult r = search_penalty(
      path, [](const DenoiseResult& d) { return d.residual_norm2; }, out.radius2, tol, Trend::nondecreasing, cfg,
      "denoise_notuning");

  // the penalty is translation invariant, so r.estimate has mean zero up to
  // round-off; remove the residue so the add-back is exact
  r.estimate.array() -= r.estimate.mean();
  out.centered_solution_tv = tv(r.estimate);
  out.estimate = r.estimate.array() + ybar;
  out.on_boundary = true;
  out.iterations = r.iterations;
  return out;
}

}  // namespace tvd
