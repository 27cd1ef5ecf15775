#include "csketch/sphere.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "csketch/errors.hpp"
#include "csketch/rng.hpp"

namespace csketch {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim_count(int d, int N) {
  if (d < 2) throw std::invalid_argument("sphere dimension d must be >= 2, got " + std::to_string(d));
  if (N < 1) throw std::invalid_argument("point count N must be >= 1, got " + std::to_string(N));
}

// Integral of sin^k over [0, theta].
double sin_power_integral(int k, double theta) {
  switch (k) {
    case 0:
      return theta;
    case 1:
      return 1.0 - std::cos(theta);
    case 2:
      return 0.5 * (theta - std::sin(theta) * std::cos(theta));
    default: {
      auto f = [k](double phi) { return std::pow(std::sin(phi), k); };
      return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, theta, 15, 1e-15);
    }
  }
}

// Points of the equal-area partition of S^{d-1}, appended to `out` starting
// at row `row`.
void fill_eq_points(int d, int N, RowMatrix& out, Index row) {
  if (d == 2) {
    for (int i = 0; i < N; ++i) {
      const double angle = (i + 0.5) * 2.0 * kPi / N;
      out(row + i, 0) = std::cos(angle);
      out(row + i, 1) = std::sin(angle);
    }
    return;
  }
  const ZonalPartition partition = zonal_partition(d, N);
  const auto zones = static_cast<int>(partition.counts.size());
  Index next = row;
  for (int z = 0; z < zones; ++z) {
    const int n = partition.counts[z];
    if (n == 0) continue;
    if (z == 0 || z == zones - 1) {
      // caps hold a single region centred on the pole
      out.row(next).setZero();
      out(next, d - 1) = (z == 0) ? 1.0 : -1.0;
      ++next;
      continue;
    }
    const double colatitude = 0.5 * (partition.bounds[z] + partition.bounds[z + 1]);
    RowMatrix sub(n, d - 1);
    fill_eq_points(d - 1, n, sub, 0);
    const double s = std::sin(colatitude);
    const double c = std::cos(colatitude);
    for (int i = 0; i < n; ++i) {
      out.row(next).head(d - 1) = s * sub.row(i);
      out(next, d - 1) = c;
      ++next;
    }
  }
}

}  // namespace

std::string_view to_string(SketchMode mode) {
  return mode == SketchMode::equal_area ? "equal-area" : "random";
}

SketchMode parse_sketch_mode(std::string_view text) {
  if (text == "equal-area") return SketchMode::equal_area;
  if (text == "random") return SketchMode::random;
  throw std::invalid_argument("unknown sketch mode '" + std::string(text) + "'");
}

EnergyConfig::EnergyConfig(double mu) : mu_(mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("Riesz exponent mu must be >= 0");
}

double sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_area needs d >= 1");
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double cap_area(int d, double colatitude) {
  if (d < 2) throw std::invalid_argument("cap_area needs d >= 2");
  switch (d) {
    case 2:
      return 2.0 * colatitude;
    case 3:
      return 2.0 * kPi * (1.0 - std::cos(colatitude));
    case 4:
      return 2.0 * kPi * (colatitude - std::sin(colatitude) * std::cos(colatitude));
    default:
      return sphere_area(d - 1) * sin_power_integral(d - 2, colatitude);
  }
}

double cap_colatitude(int d, double area) {
  if (area <= 0.0) return 0.0;
  if (area >= sphere_area(d)) return kPi;
  double lo = 0.0;
  double hi = kPi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double a = cap_area(d, mid);
    if (a == area) return mid;
    (a < area ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ZonalPartition zonal_partition(int d, int N) {
  check_dim_count(d, N);
  if (d < 3) throw std::invalid_argument("zonal_partition needs d >= 3");
  ZonalPartition p;
  p.dim = d;
  p.count = N;
  if (N == 1) {
    p.bounds = {0.0, kPi};
    p.counts = {1};
    return p;
  }
  if (N == 2) {
    p.bounds = {0.0, 0.5 * kPi, kPi};
    p.counts = {1, 1};
    return p;
  }
  const double region = sphere_area(d) / N;
  const double polar = cap_colatitude(d, region);
  const double ideal_angle = std::pow(region, 1.0 / (d - 1));
  const int collars = std::max(1, static_cast<int>(std::lround((kPi - 2.0 * polar) / ideal_angle)));

  // ideal (fractional) region counts per zone
  const double fitting = (kPi - 2.0 * polar) / collars;
  std::vector<double> ideal(collars + 2, 1.0);
  for (int k = 1; k <= collars; ++k) {
    const double top = polar + (k - 1) * fitting;
    const double bottom = polar + k * fitting;
    ideal[k] = (cap_area(d, bottom) - cap_area(d, top)) / region;
  }

  // round with the running discrepancy carried forward
  p.counts.assign(collars + 2, 0);
  double discrepancy = 0.0;
  for (int k = 0; k < collars + 2; ++k) {
    p.counts[k] = static_cast<int>(std::lround(ideal[k] + discrepancy));
    discrepancy += ideal[k] - p.counts[k];
  }

  p.bounds.assign(collars + 3, 0.0);
  p.bounds[1] = polar;
  int subtotal = 1;
  for (int k = 1; k <= collars; ++k) {
    subtotal += p.counts[k];
    p.bounds[k + 1] = cap_colatitude(d, subtotal * region);
  }
  p.bounds[collars + 2] = kPi;
  return p;
}

std::vector<double> region_areas(const ZonalPartition& partition) {
  std::vector<double> areas;
  areas.reserve(partition.count);
  for (std::size_t z = 0; z < partition.counts.size(); ++z) {
    const int n = partition.counts[z];
    if (n == 0) continue;
    const double zone =
        cap_area(partition.dim, partition.bounds[z + 1]) - cap_area(partition.dim, partition.bounds[z]);
    for (int i = 0; i < n; ++i) areas.push_back(zone / n);
  }
  return areas;
}

DirectionSet eq_points(int d, int N) {
  check_dim_count(d, N);
  DirectionSet set;
  set.dim = d;
  set.mode = SketchMode::equal_area;
  set.points.resize(N, d);
  fill_eq_points(d, N, set.points, 0);
  return set;
}

DirectionSet random_points(int d, int N, std::uint64_t seed) {
  check_dim_count(d, N);
  DirectionSet set;
  set.dim = d;
  set.mode = SketchMode::random;
  set.seed = seed;
  set.points.resize(N, d);
  Rng rng(seed);
  for (int i = 0; i < N; ++i) {
    double norm = 0.0;
    do {
      for (int c = 0; c < d; ++c) set.points(i, c) = rng.normal();
      norm = set.points.row(i).norm();
    } while (norm == 0.0);
    set.points.row(i) /= norm;
  }
  return set;
}

double riesz_energy(const DirectionSet& points, const EnergyConfig& cfg) {
  const Index n = points.size();
  if (n < 2) throw std::invalid_argument("riesz_energy needs at least two points");
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double dist = (points.points.row(i) - points.points.row(j)).norm();
      if (dist == 0.0) {
        throw DataError("coincident points " + std::to_string(i) + " and " + std::to_string(j));
      }
      total += cfg.mu() > 0.0 ? std::pow(dist, -cfg.mu()) : -std::log(dist);
    }
  }
  // each unordered pair appears twice in the ordered sum
  return 2.0 * total;
}

double min_separation(const DirectionSet& points) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < points.size(); ++i) {
    for (Index j = i + 1; j < points.size(); ++j) {
      best = std::min(best, (points.points.row(i) - points.points.row(j)).norm());
    }
  }
  return best;
}

}  // namespace csketch
