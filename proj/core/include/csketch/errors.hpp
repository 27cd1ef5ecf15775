#pragma once

#include <stdexcept>
#include <string>

namespace csketch {

// Input data failed validation: wrong dimension, outside the ball, bad CSV cell.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A factorization failed or produced non-finite output.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csketch
