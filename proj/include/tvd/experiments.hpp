#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tvd/solver.hpp"

namespace tvd {

enum class Estimator { ideal_constrained, notuning };

/// "ideal" or "notuning".
Estimator parse_estimator(const std::string& name);
std::string to_string(Estimator estimator);

struct ExperimentSpec
{
  SignalKind signal = SignalKind::two;
  std::vector<Index> n_list;  ///< strictly ascending, even
  int reps = 2;
  double sigma = 1.0;
  Estimator estimator = Estimator::ideal_constrained;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ExperimentRecord
{
  Index n = 0;
  Index N = 0;  ///< n^2
  double mse_mean = 0.0;
  double mse_stderr = 0.0;  ///< sample std / sqrt(reps)
};

struct ExperimentReport
{
  ExperimentSpec spec;
  std::vector<ExperimentRecord> records;
  // NaN when fewer than two sizes were run or some mse_mean is 0
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

struct LoglogFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Least-squares line through (ln N, ln mse). Needs at least two points with
/// distinct N and positive mse. With exactly two points the standard error is 0.
LoglogFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// Loss ||estimate - truth||^2 / N of one replicate: y = truth + sigma Z with Z
/// drawn from stream_seed(seed, n, rep). The ideal estimator projects onto the
/// tv ball of radius tv(truth).
double replicate_mse(const ExperimentSpec& spec, Index n, int rep, const SolverConfig& cfg = {});

/// Runs every (n, rep) replicate on up to `threads` workers (0 = all cores)
/// and reduces in (n, rep) order, so the report is bit-identical for any
/// thread count. A failing replicate aborts the run; the exception message
/// names its n and rep.
ExperimentReport run_experiment(const ExperimentSpec& spec, const SolverConfig& cfg = {}, unsigned threads = 1);

}  // namespace tvd
