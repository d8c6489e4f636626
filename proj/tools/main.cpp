// tvd: command-line front end for the TV denoising library.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tvd/experiments.hpp"
#include "tvd/geometry.hpp"
#include "tvd/io.hpp"
#include "tvd/partition.hpp"
#include "tvd/random.hpp"
#include "tvd/solver.hpp"
#include "tvd/tuning_free.hpp"

using namespace tvd;

namespace {

void add_solver_flags(CLI::App* app, SolverConfig& cfg)
{
  app->add_option("--max-iters", cfg.max_iters, "Iteration cap per penalized solve")->capture_default_str();
  app->add_option("--rel-tol", cfg.rel_tol, "Relative iterate-change tolerance")->capture_default_str();
  app->add_option("--bisect-tol", cfg.bisect_tol, "Relative accuracy of penalty searches")->capture_default_str();
  app->add_option("--max-bisect", cfg.max_bisect, "Penalized solves allowed per search")->capture_default_str();
}

std::vector<Index> parse_n_list(const std::string& text)
{
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<Index>(v));
    } catch (const std::exception&) {
      throw ArgumentError("--n-list: cannot parse '" + item + "' as an integer");
    }
  }
  return out;
}

Index square_side(const ImageMatrix& y, const char* flag)
{
  if (y.rows() != y.cols())
    throw ShapeError(std::string(flag) + " is a normalized value and needs a square input matrix");
  return y.rows();
}

std::string json_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Total-variation denoising on 2D grids"};
  app.require_subcommand(1);
  SolverConfig cfg;

  // denoise
  std::string input, output, mode = "constrained";
  double v_norm = -1.0, lambda_norm = -1.0;
  auto* denoise = app.add_subcommand("denoise", "Constrained or penalized TV denoising of a CSV matrix");
  denoise->add_option("--input", input, "Input matrix (plain CSV)")->required();
  denoise->add_option("--out", output, "Output matrix (plain CSV)")->required();
  denoise->add_option("--mode", mode, "constrained or penalized")
      ->check(CLI::IsMember({"constrained", "penalized"}))
      ->capture_default_str();
  auto* v_opt = denoise->add_option("--v", v_norm,
                                    "Normalized TV budget: keep tv(theta)/n <= V for an n x n input (constrained mode)");
  auto* l_opt = denoise->add_option(
      "--lambda", lambda_norm,
      "Normalized penalty: minimize ||y - theta||^2 + lambda tv(theta)/n for an n x n input (penalized mode)");
  v_opt->excludes(l_opt);
  add_solver_flags(denoise, cfg);

  // tune-free
  std::string json_out;
  auto* tune = app.add_subcommand("tune-free", "Tuning-free TV denoising of a square CSV matrix");
  tune->add_option("--input", input, "Input matrix (plain CSV)")->required();
  tune->add_option("--out", output, "Output matrix (plain CSV)")->required();
  tune->add_option("--json", json_out, "Write sigma_hat, radius and boundary flag to this JSON file");
  add_solver_flags(tune, cfg);

  // simulate
  std::string signal = "two", n_list = "64,96,128,192,256", estimator = "ideal";
  int reps = 30;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo MSE across sizes with a log-log slope fit");
  simulate->add_option("--signal", signal, "two, four or worst")
      ->check(CLI::IsMember({"two", "four", "worst"}))
      ->capture_default_str();
  simulate->add_option("--n-list", n_list, "Comma-separated ascending even sizes")->capture_default_str();
  simulate->add_option("--reps", reps, "Replicates per size")->capture_default_str();
  simulate->add_option("--sigma", sigma, "Noise level")->capture_default_str();
  simulate->add_option("--estimator", estimator, "ideal or notuning")
      ->check(CLI::IsMember({"ideal", "notuning"}))
      ->capture_default_str();
  simulate->add_option("--seed", seed, "Master seed")->capture_default_str();
  simulate->add_option("--out", output, "Report CSV; the JSON sidecar goes next to it")->required();
  simulate->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_solver_flags(simulate, cfg);

  // partition
  double epsilon = 0.0;
  auto* part = app.add_subcommand("partition", "Greedy (TV, eps) quadtree partition of a CSV matrix");
  part->add_option("--input", input, "Input matrix (plain CSV)")->required();
  part->add_option("--epsilon", epsilon, "Per-block TV tolerance (unnormalized)")->required();
  part->add_option("--out", output, "Partition JSON")->required();

  // gwidth
  Index n = 16;
  int samples = 400;
  auto* gwidth = app.add_subcommand("gwidth", "Monte Carlo Gaussian width of the tangent cone at a signal");
  gwidth->add_option("--signal", signal, "two, four or worst")
      ->check(CLI::IsMember({"two", "four", "worst"}))
      ->capture_default_str();
  gwidth->add_option("--n", n, "Side length")->capture_default_str();
  gwidth->add_option("--samples", samples, "Gaussian draws")->capture_default_str();
  gwidth->add_option("--seed", seed, "Master seed")->capture_default_str();
  gwidth->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_solver_flags(gwidth, cfg);

  // witness
  double c1 = 1.0 / std::sqrt(2.0);
  int witness_samples = 2000;
  auto* witness = app.add_subcommand("witness", "Monte Carlo mean of <nu, Z> for the two-block lower-bound witness");
  witness->add_option("--n", n, "Side length (even perfect square)")->capture_default_str();
  witness->add_option("--samples", witness_samples, "Gaussian draws")->capture_default_str();
  witness->add_option("--seed", seed, "Master seed")->capture_default_str();
  witness->add_option("--c1", c1, "Witness constant in (0, 1)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*denoise) {
      const ImageMatrix y = read_matrix_csv(input);
      DenoiseResult r;
      if (mode == "constrained") {
        if (v_opt->count() == 0) throw ArgumentError("constrained mode needs --v");
        if (l_opt->count() > 0) throw ArgumentError("--lambda applies to penalized mode only");
        r = project_tv_ball(y, v_norm * static_cast<double>(square_side(y, "--v")), cfg);
      } else {
        if (l_opt->count() == 0) throw ArgumentError("penalized mode needs --lambda");
        if (v_opt->count() > 0) throw ArgumentError("--v applies to constrained mode only");
        r = denoise_penalized(y, lambda_norm / static_cast<double>(square_side(y, "--lambda")), cfg);
      }
      write_matrix_csv(output, r.estimate);
      std::cout << "achieved_tv=" << format_double(r.achieved_tv) << " residual_norm2=" << format_double(r.residual_norm2)
                << " iterations=" << r.iterations << " converged=" << json_bool(r.converged) << "\n";
    } else if (*tune) {
      const ImageMatrix y = read_matrix_csv(input);
      const TuningFreeResult r = denoise_notuning(y, cfg);
      write_matrix_csv(output, r.estimate);
      const std::string summary = "{\"sigma_hat\": " + format_double(r.sigma_hat) +
                                  ", \"radius2\": " + format_double(r.radius2) +
                                  ", \"on_boundary\": " + json_bool(r.on_boundary) +
                                  ", \"centered_solution_tv\": " + format_double(r.centered_solution_tv) + "}\n";
      if (!json_out.empty()) write_text(json_out, summary);
      std::cout << summary;
    } else if (*simulate) {
      ExperimentSpec spec;
      spec.signal = parse_signal_kind(signal);
      spec.n_list = parse_n_list(n_list);
      spec.reps = reps;
      spec.sigma = sigma;
      spec.estimator = parse_estimator(estimator);
      spec.seed = seed;
      const ExperimentReport report = run_experiment(spec, cfg, threads);
      write_report(output, report);
      std::cout << "slope=" << format_double(report.slope) << " intercept=" << format_double(report.intercept)
                << " slope_stderr=" << format_double(report.slope_stderr) << "\n";
    } else if (*part) {
      const ImageMatrix y = read_matrix_csv(input);
      const RectPartition p = greedy_tv_partition(y, epsilon);
      write_text(output, partition_to_json(p));
      std::cout << "blocks=" << p.rects.size() << "\n";
    } else if (*gwidth) {
      const SignPattern sp = sign_pattern(make_signal({parse_signal_kind(signal), n}));
      const WidthEstimate w = gaussian_width_cone(sp, samples, seed, cfg, threads);
      std::cout << "{\"mean\": " << format_double(w.mean) << ", \"std_error\": " << format_double(w.std_error)
                << ", \"samples\": " << w.samples << ", \"failures\": " << w.failures << "}\n";
    } else if (*witness) {
      if (witness_samples < 2) throw ArgumentError("--samples must be at least 2");
      const SignPattern sp = sign_pattern(make_signal({SignalKind::two, n}));
      std::vector<double> v;
      bool all_members = true;
      double max_norm = 0.0;
      for (int k = 0; k < witness_samples; ++k) {
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(k)));
        const ImageMatrix z = standard_normal(n, n, rng);
        const ImageMatrix nu = lower_bound_witness(z, c1);
        v.push_back(nu.cwiseProduct(z).sum());
        all_members = all_members && cone_membership(sp, nu).member;
        max_norm = std::max(max_norm, nu.norm());
      }
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      const double se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
      const double dn = static_cast<double>(n);
      const double c2 = std::min(c1, std::sqrt(1.0 - c1 * c1));
      const double closed = (c2 - c1 / std::sqrt(dn)) * std::pow(dn, 0.25) / std::sqrt(2.0 * std::numbers::pi);
      std::cout << "{\"mean\": " << format_double(mean) << ", \"std_error\": " << format_double(se)
                << ", \"expected\": " << format_double(closed) << ", \"samples\": " << witness_samples
                << ", \"all_members\": " << json_bool(all_members) << ", \"max_norm\": " << format_double(max_norm)
                << "}\n";
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
