#pragma once

#include <cstdint>
#include <vector>

#include "tvd/solver.hpp"

namespace tvd {

struct ActiveEdge
{
  EdgeIndex edge;
  int sign = 1;  ///< sgn of the base gradient on this edge

  friend bool operator==(const ActiveEdge&, const ActiveEdge&) = default;
};

/// Active edges A = {e : |grad_e base| > edge_tol} with their signs, in
/// canonical edge order. Every other edge is a zero edge.
struct SignPattern
{
  ImageMatrix base;
  double edge_tol = 0.0;
  std::vector<ActiveEdge> active;

  Index rows() const { return base.rows(); }
  Index cols() const { return base.cols(); }

  /// Signs laid out like EdgeWeights: 0 on zero edges, +-1 on active ones.
  ImageMatrix horizontal_signs() const;
  ImageMatrix vertical_signs() const;
};

/// Default edge tolerance 1e-9 * max(1, ||base||_inf).
double default_edge_tol(const ImageMatrix& base);

SignPattern sign_pattern(const ImageMatrix& base, double edge_tol);
inline SignPattern sign_pattern(const ImageMatrix& base) { return sign_pattern(base, default_edge_tol(base)); }

/// h(theta) = sum_{zero edges} |grad_e theta| + sum_{active} s_e grad_e theta.
/// The tangent cone of the tv ball at the base is {h <= 0}.
double cone_constraint(const SignPattern& sp, const ImageMatrix& theta);

struct Membership
{
  bool member = false;
  double slack = 0.0;  ///< -h(theta)
};

/// member iff slack >= -1e-9 * max(1, tv(theta)).
Membership cone_membership(const SignPattern& sp, const ImageMatrix& theta);

/// Euclidean projection of z onto the tangent cone. For a multiplier mu >= 0
/// the penalized problem 1/2 ||z - theta||^2 + mu h(theta) is a weighted TV
/// prox of z - mu D_A^T s with weight mu on the zero edges. h of its solution
/// does not increase with mu; mu is bracketed by doubling and then bisected
/// until h lies in [-1e-6 n^2, 0] (n the longer side). If the bracket turns
/// out inconsistent, a geometric sweep over mu picks the first feasible point.
/// Throws ConvergenceError when neither succeeds.
ImageMatrix project_onto_cone(const SignPattern& sp, const ImageMatrix& z, const SolverConfig& cfg = {});

struct WidthEstimate
{
  double mean = 0.0;
  double std_error = 0.0;  ///< sample std / sqrt(samples)
  int samples = 0;         ///< successful projections
  int failures = 0;
};

/// Monte Carlo estimate of E ||Pi_cone(Z)||, the Gaussian width of the cone
/// intersected with the unit ball. Sample k draws Z from its own stream
/// stream_seed(seed, k); the mean is reduced in sample order, so the result
/// does not depend on `threads` (0 = all cores). Failed projections are
/// skipped; more than 1% failures throws ConvergenceError.
WidthEstimate gaussian_width_cone(const SignPattern& sp, int samples, std::uint64_t seed,
                                  const SolverConfig& cfg = {}, unsigned threads = 1);

/// The lower-bound witness for the two-block signal: columns 0 .. n/2 - 2 equal
/// c1 / n, columns n/2 .. n - 1 are zero, and column n/2 - 1 is split into
/// sqrt(n) blocks of sqrt(n) rows, each set to c2 / sqrt(n) when the block sum
/// of z's column n/2 - 1 is positive and c1 / n otherwise, with
/// c2 = min(c1, sqrt(1 - c1^2)). Needs n x n input with n an even perfect square.
ImageMatrix lower_bound_witness(const ImageMatrix& z, double c1 = 0.70710678118654752);

}  // namespace tvd
