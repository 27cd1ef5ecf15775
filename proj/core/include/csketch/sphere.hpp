#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "csketch/types.hpp"

namespace csketch {

enum class SketchMode { equal_area, random };

std::string_view to_string(SketchMode mode);
/// Accepts "equal-area" or "random"; throws std::invalid_argument otherwise.
SketchMode parse_sketch_mode(std::string_view text);

/// N unit vectors on S^{d-1}, one per row of `points`.
struct DirectionSet {
  int dim = 0;
  RowMatrix points;
  SketchMode mode = SketchMode::equal_area;
  std::uint64_t seed = 0;

  Index size() const { return points.rows(); }
};

class EnergyConfig {
 public:
  explicit EnergyConfig(double mu);
  double mu() const { return mu_; }

 private:
  double mu_;
};

/// Centres of Leopardi's recursive zonal equal-area partition of S^{d-1}
/// into N regions.
DirectionSet eq_points(int d, int N);

/// N i.i.d. uniform directions (normalised Gaussian vectors).
DirectionSet random_points(int d, int N, std::uint64_t seed);

/// Sum over ordered pairs i != j of |xi_i - xi_j|^{-mu}, or of
/// -log|xi_i - xi_j| when mu == 0. Throws DataError on coincident points.
double riesz_energy(const DirectionSet& points, const EnergyConfig& cfg);

double min_separation(const DirectionSet& points);

/// Surface area of S^{d-1} embedded in R^d.
double sphere_area(int d);

/// Area of the spherical cap of S^{d-1} with the given colatitude.
double cap_area(int d, double colatitude);

/// Inverse of cap_area by bisection on [0, pi].
double cap_colatitude(int d, double area);

/// Zones of the top-level partition of S^{d-1}, d >= 3: north cap, collars,
/// south cap. Zone z spans colatitudes [bounds[z], bounds[z+1]] and is split
/// into counts[z] regions by recursing on S^{d-2}.
struct ZonalPartition {
  int dim = 0;
  int count = 0;
  std::vector<double> bounds;
  std::vector<int> counts;

  int collars() const { return static_cast<int>(counts.size()) - 2; }
};

ZonalPartition zonal_partition(int d, int N);

/// Area of every region of the partition, zone by zone.
std::vector<double> region_areas(const ZonalPartition& partition);

}  // namespace csketch
