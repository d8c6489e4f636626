#pragma once

#include <stdexcept>
#include <string>

#include "tvd/image.hpp"

namespace tvd {

/// Invalid caller input: bad parameter values, non-finite entries, malformed files.
class ArgumentError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Matrix shapes that do not fit together, or an edge outside the grid.
class ShapeError : public ArgumentError
{
public:
  using ArgumentError::ArgumentError;
};

/// An iterative method ran out of budget. Carries the best iterate seen.
class ConvergenceError : public std::runtime_error
{
public:
  ConvergenceError(const std::string& what, ImageMatrix best)
    : std::runtime_error(what), best_(std::move(best))
  {}

  const ImageMatrix& best_iterate() const noexcept { return best_; }

private:
  ImageMatrix best_;
};

}  // namespace tvd
