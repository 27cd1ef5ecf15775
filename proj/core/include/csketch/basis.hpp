#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csketch/components.hpp"
#include "csketch/sphere.hpp"
#include "csketch/types.hpp"

namespace csketch {

/// Inputs to make_spec.
struct SketchConfig {
  int dim = 3;
  int J = 1;
  int n = 1;
  int N = 1;
  double tau = 0.1;
  std::optional<int> m;  ///< defaults to default_depth(n)
  SketchMode mode = SketchMode::equal_area;
  std::uint64_t seed = 0;
  Interval operand_range{};
};

/// Complete description of the feature basis
///   PG_J(T_k(xi_l . x), xi_l . x (j times), 1 (J-1-j times))
/// over j in [0, J), k in [1, n], l in [1, N].
struct SketchSpec {
  int J = 1;
  int n = 1;
  double tau = 0.1;
  ComponentParams components{1};
  std::vector<double> grid;  ///< t_0 < ... < t_n
  DirectionSet directions;
  SketchMode mode = SketchMode::equal_area;
  std::uint64_t seed = 0;

  int dim() const { return directions.dim; }
  int N() const { return static_cast<int>(directions.size()); }
  Index dimension() const { return static_cast<Index>(J) * n * N(); }
};

/// Triple (j, k, l) addressing one basis function. j is 0-based, k and l are
/// 1-based, matching the coefficient layout a_{jkl}.
struct FeatureIndex {
  int j = 0;
  int k = 1;
  int l = 1;

  friend bool operator==(const FeatureIndex&, const FeatureIndex&) = default;
};

Index flat_index(const FeatureIndex& idx, const SketchSpec& spec);
FeatureIndex unflat_index(Index flat, const SketchSpec& spec);

/// ceil(log2 n) + 4
int default_depth(int n);

/// n^(-4J-1), the locality width used by the rate analysis.
double theory_tau(int n, int J);

SketchSpec make_spec(const SketchConfig& config);

/// Throws std::invalid_argument if the spec breaks one of its invariants.
void validate(const SketchSpec& spec);

double feature_value(std::span<const double> x, const FeatureIndex& idx, const SketchSpec& spec);

/// p x (J n N) matrix of feature values, columns ordered by flat_index.
/// Throws DataError if a row lies outside the ball of radius 1/2 + slack.
Matrix design_matrix(const RowMatrix& X, const SketchSpec& spec, double slack = 1e-12);

}  // namespace csketch
