#pragma once

#include <Eigen/Core>

namespace tvd {

/// Dense row-major grid of values. Entry (i, j) is grid vertex (i, j).
template <typename Scalar>
using Image = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ImageMatrix = Image<double>;

}  // namespace tvd
