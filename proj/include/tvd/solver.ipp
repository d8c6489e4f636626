#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace tvd {

template <typename Score>
DenoiseResult search_penalty(PenalizedPath& path, Score&& score, double target, double tol, Trend trend,
                             const SolverConfig& cfg, const char* caller)
{
  // Sign convention: f > 0 on the small-penalty side of the root.
  const double sign = trend == Trend::nonincreasing ? 1.0 : -1.0;

  DenoiseResult best;
  double best_gap = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  int evaluations = 0;

  auto evaluate = [&](double lambda, double& f) {
    DenoiseResult r = path.solve(lambda);
    ++evaluations;
    total_iterations += r.iterations;
    const double value = score(r);
    f = sign * (value - target);
    const double gap = std::abs(value - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = r;
    }
    if (gap <= tol) {
      r.iterations = total_iterations;
      return std::optional<DenoiseResult>(std::move(r));
    }
    return std::optional<DenoiseResult>();
  };

  double hi = path.constant_threshold();
  double f_hi = 0.0;
  if (auto done = evaluate(hi, f_hi)) return *done;
  if (f_hi > 0.0)
    throw ConvergenceError(std::string(caller) + ": target not crossed at the constant solution", best.estimate);

  double lo = 0.5 * hi;
  double f_lo = 0.0;
  for (;;) {
    if (evaluations >= cfg.max_bisect) goto exhausted;
    if (auto done = evaluate(lo, f_lo)) return *done;
    if (f_lo > 0.0) break;
    hi = lo;
    f_hi = f_lo;
    lo *= 0.5;
  }

  {
    // Brent-Dekker on x = log(lambda); b is the latest iterate, c brackets the root with it
    double a = std::log(lo), fa = f_lo;
    double b = std::log(hi), fb = f_hi;
    double c = a, fc = fa;
    double d = b - a, e = d;
    while (evaluations < cfg.max_bisect) {
      if ((fb > 0.0) == (fc > 0.0)) {
        c = a;
        fc = fa;
        d = e = b - a;
      }
      if (std::abs(fc) < std::abs(fb)) {
        a = b;
        b = c;
        c = a;
        fa = fb;
        fb = fc;
        fc = fa;
      }
      const double step_tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b));
      const double half = 0.5 * (c - b);
      if (std::abs(half) <= step_tol) break;
      if (std::abs(e) >= step_tol && std::abs(fa) > std::abs(fb)) {
        const double s = fb / fa;
        double p, q;
        if (a == c) {
          p = 2.0 * half * s;
          q = 1.0 - s;
        } else {
          const double qa = fa / fc, r = fb / fc;
          p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
          q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
        }
        if (p > 0.0) q = -q;
        p = std::abs(p);
        if (2.0 * p < std::min(3.0 * half * q - std::abs(step_tol * q), std::abs(e * q))) {
          e = d;
          d = p / q;
        } else {
          d = half;
          e = d;
        }
      } else {
        d = half;
        e = d;
      }
      a = b;
      fa = fb;
      b += std::abs(d) > step_tol ? d : std::copysign(step_tol, half);
      if (auto done = evaluate(std::exp(b), fb)) return *done;
    }
  }

exhausted:
  throw ConvergenceError(std::string(caller) + ": no penalty within tolerance " + std::to_string(tol) +
                             " after " + std::to_string(evaluations) + " solves (best gap " +
                             std::to_string(best_gap) + ")",
                         best.estimate);
}

}  // namespace tvd
