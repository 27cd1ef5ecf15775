#pragma once

#include <string>
#include <vector>

namespace csketch::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

/// Static SVG rendering with fixed-precision coordinates, so identical
/// inputs give identical bytes.
std::string render_svg(const LineChart& chart);

}  // namespace csketch::cli
