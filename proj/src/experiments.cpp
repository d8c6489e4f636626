#include "tvd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvd/parallel.hpp"
#include "tvd/random.hpp"
#include "tvd/tuning_free.hpp"

namespace tvd {

Estimator parse_estimator(const std::string& name)
{
  if (name == "ideal" || name == "ideal_constrained") return Estimator::ideal_constrained;
  if (name == "notuning") return Estimator::notuning;
  throw ArgumentError("unknown estimator '" + name + "' (expected ideal or notuning)");
}

std::string to_string(Estimator estimator)
{
  return estimator == Estimator::notuning ? "notuning" : "ideal";
}

void ExperimentSpec::validate() const
{
  if (signal == SignalKind::custom) throw ArgumentError("experiments need a generated signal (two, four or worst)");
  if (n_list.empty()) throw ArgumentError("n_list must not be empty");
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] < 2 || n_list[k] % 2 != 0) throw ArgumentError("every n must be even and at least 2");
    if (k > 0 && n_list[k] <= n_list[k - 1]) throw ArgumentError("n_list must be strictly ascending");
  }
  if (reps < 2) throw ArgumentError("reps must be at least 2");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be positive and finite");
}

LoglogFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points)
{
  if (points.size() < 2) throw ArgumentError("a slope needs at least two points");
  const double k = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [N, mse] : points) {
    if (!(N > 0.0) || !(mse > 0.0) || !std::isfinite(N) || !std::isfinite(mse))
      throw ArgumentError("log-log fit needs positive finite N and mse");
    mx += std::log(N);
    my += std::log(mse);
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [N, mse] : points) {
    const double dx = std::log(N) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(mse) - my);
  }
  if (sxx == 0.0) throw ArgumentError("log-log fit needs at least two distinct N");

  LoglogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (points.size() > 2) {
    double sse = 0.0;
    for (const auto& [N, mse] : points) {
      const double r = std::log(mse) - fit.intercept - fit.slope * std::log(N);
      sse += r * r;
    }
    fit.slope_stderr = std::sqrt(sse / (k - 2.0) / sxx);
  }
  return fit;
}

double replicate_mse(const ExperimentSpec& spec, Index n, int rep, const SolverConfig& cfg)
{
  const ImageMatrix truth = make_signal({spec.signal, n});
  Rng rng(stream_seed(spec.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)));
  const ImageMatrix y = truth + spec.sigma * standard_normal(n, n, rng);

  ImageMatrix estimate;
  if (spec.estimator == Estimator::ideal_constrained)
    estimate = project_tv_ball(y, tv(truth), cfg).estimate;
  else
    estimate = denoise_notuning(y, cfg).estimate;
  return (estimate - truth).squaredNorm() / static_cast<double>(n * n);
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const SolverConfig& cfg, unsigned threads)
{
  spec.validate();
  cfg.validate();

  const std::size_t sizes = spec.n_list.size();
  const std::size_t reps = static_cast<std::size_t>(spec.reps);
  std::vector<double> mse(sizes * reps, 0.0);

  // largest sizes first so long tasks start early; results land by index
  parallel_for(mse.size(), threads, [&](std::size_t task) {
    const std::size_t slot = mse.size() - 1 - task;
    const Index n = spec.n_list[slot / reps];
    const int rep = static_cast<int>(slot % reps);
    const std::string where = " (n=" + std::to_string(n) + ", rep=" + std::to_string(rep) + ")";
    try {
      mse[slot] = replicate_mse(spec, n, rep, cfg);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(e.what() + where, e.best_iterate());
    } catch (const ArgumentError& e) {
      throw ArgumentError(e.what() + where);
    }
  });

  ExperimentReport report;
  report.spec = spec;
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < sizes; ++i) {
    ExperimentRecord rec;
    rec.n = spec.n_list[i];
    rec.N = rec.n * rec.n;
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) sum += mse[i * reps + r];
    rec.mse_mean = sum / static_cast<double>(reps);
    double ss = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double d = mse[i * reps + r] - rec.mse_mean;
      ss += d * d;
    }
    rec.mse_stderr = std::sqrt(ss / static_cast<double>(reps - 1)) / std::sqrt(static_cast<double>(reps));
    report.records.push_back(rec);
    points.emplace_back(static_cast<double>(rec.N), rec.mse_mean);
  }

  const bool fittable = points.size() >= 2 && std::all_of(points.begin(), points.end(), [](const auto& p) { return p.second > 0.0; });
  if (fittable) {
    const LoglogFit fit = fit_loglog_slope(points);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.slope_stderr = fit.slope_stderr;
  } else {
    report.slope = report.intercept = report.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace tvd
