#pragma once

#include <cstdint>
#include <random>

#include "tvd/image.hpp"

namespace tvd {

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream for task (a, b) under a master seed:
/// seed xor mix64(mix64(a) + b).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
{
  return seed ^ mix64(mix64(a) + b);
}

using Rng = std::mt19937_64;

/// rows x cols matrix of independent standard normals, filled row-major.
inline ImageMatrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
  std::normal_distribution<double> normal;
  ImageMatrix z(rows, cols);
  for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = normal(rng);
  return z;
}

}  // namespace tvd
