#pragma once

#include <random>

#include "tvd/core.hpp"

namespace testing {

inline tvd::ImageMatrix random_matrix(tvd::Index m, tvd::Index n, std::mt19937_64& rng, double scale = 1.0)
{
  std::normal_distribution<double> g(0.0, scale);
  tvd::ImageMatrix t(m, n);
  for (tvd::Index k = 0; k < t.size(); ++k) t.data()[k] = g(rng);
  return t;
}

inline double sup_norm(const tvd::ImageMatrix& a, const tvd::ImageMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testing
