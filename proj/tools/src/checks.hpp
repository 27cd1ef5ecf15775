#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csketch/types.hpp"

namespace csketch::cli {

struct CheckOptions {
  int m_min = 1;
  int m_max = 10;
  Index grid = 100001;   ///< points on [0, 1] for the square sup error
  Index tuples = 10000;  ///< random operand tuples per product row
  std::vector<double> taus{0.5, 0.1, 0.01, 0.001};
  std::vector<int> J{2, 3, 5};
  std::uint64_t seed = 0;
};

struct CheckRow {
  std::string component;  ///< square, product or trapezoid
  int m = 0;
  double tau = 0.0;
  int J = 0;
  double sup_error = 0.0;
  double reference = 0.0;  ///< exact sup error (square), bound (product), 0 (trapezoid)
  double ratio = 0.0;      ///< previous row's error over this one, 0 on the first row
  bool ok = true;
};

/// Measures component errors against their closed forms and flags rows that
/// break the expected law: square error equal to 2^(-2m-2), product errors
/// under the bound and shrinking by at least 1.9 per unit of m, trapezoid
/// equal to its piecewise-linear definition.
std::vector<CheckRow> components_check(const CheckOptions& options);

void write_check_csv(std::ostream& out, const std::vector<CheckRow>& rows);

}  // namespace csketch::cli
