#include "csketch/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "csketch/errors.hpp"
#include "csketch/rng.hpp"

namespace csketch {

namespace {

double project(const double* x, const double* xi, int d) {
  double s = 0.0;
  for (int c = 0; c < d; ++c) s += xi[c] * x[c];
  return s;
}

TrapezoidSpec interval_trapezoid(const SketchSpec& spec, int k) {
  return TrapezoidSpec(spec.grid[k - 1], spec.grid[k], spec.tau);
}

}  // namespace

Index flat_index(const FeatureIndex& idx, const SketchSpec& spec) {
  return (static_cast<Index>(idx.j) * spec.n + (idx.k - 1)) * spec.N() + (idx.l - 1);
}

FeatureIndex unflat_index(Index flat, const SketchSpec& spec) {
  if (flat < 0 || flat >= spec.dimension()) throw std::out_of_range("flat feature index out of range");
  const Index N = spec.N();
  FeatureIndex idx;
  idx.l = static_cast<int>(flat % N) + 1;
  flat /= N;
  idx.k = static_cast<int>(flat % spec.n) + 1;
  idx.j = static_cast<int>(flat / spec.n);
  return idx;
}

int default_depth(int n) {
  if (n < 1) throw std::invalid_argument("grid parameter n must be >= 1");
  int e = 0;
  while ((1LL << e) < n) ++e;
  return e + 4;
}

double theory_tau(int n, int J) { return std::pow(static_cast<double>(n), -4.0 * J - 1.0); }

SketchSpec make_spec(const SketchConfig& config) {
  if (config.J < 1) throw std::invalid_argument("frequency parameter J must be >= 1");
  if (config.n < 1) throw std::invalid_argument("grid parameter n must be >= 1");
  if (config.N < 1) throw std::invalid_argument("direction count N must be >= 1");
  if (!(config.tau > 0.0 && config.tau <= 1.0)) throw std::invalid_argument("tau must lie in (0, 1]");

  SketchSpec spec;
  spec.J = config.J;
  spec.n = config.n;
  spec.tau = config.tau;
  spec.components = ComponentParams(config.m.value_or(default_depth(config.n)), config.operand_range);
  spec.mode = config.mode;
  spec.seed = config.seed;
  spec.grid.resize(config.n + 1);

  if (config.mode == SketchMode::equal_area) {
    for (int k = 0; k <= config.n; ++k) spec.grid[k] = -0.5 + static_cast<double>(k) / config.n;
    spec.directions = eq_points(config.dim, config.N);
  } else {
    Rng rng(derive_seed(config.seed, 0));
    spec.grid[0] = -0.5;
    bool distinct = false;
    while (!distinct) {
      for (int k = 1; k <= config.n; ++k) spec.grid[k] = rng.uniform_open(-0.5, 0.5);
      std::sort(spec.grid.begin() + 1, spec.grid.end());
      distinct = std::adjacent_find(spec.grid.begin(), spec.grid.end()) == spec.grid.end();
    }
    spec.directions = random_points(config.dim, config.N, derive_seed(config.seed, 1));
    spec.directions.seed = config.seed;
  }
  validate(spec);
  return spec;
}

void validate(const SketchSpec& spec) {
  if (spec.J < 1 || spec.n < 1) throw std::invalid_argument("sketch spec needs J >= 1 and n >= 1");
  if (!(spec.tau > 0.0 && spec.tau <= 1.0)) throw std::invalid_argument("sketch spec tau must lie in (0, 1]");
  if (spec.N() < 1 || spec.dim() < 2 || spec.directions.points.cols() != spec.dim()) {
    throw std::invalid_argument("sketch spec needs at least one direction in dimension >= 2");
  }
  if (static_cast<int>(spec.grid.size()) != spec.n + 1) throw std::invalid_argument("grid must have n + 1 points");
  if (spec.grid.front() != -0.5) throw std::invalid_argument("grid must start at -1/2");
  for (int k = 1; k <= spec.n; ++k) {
    if (!(spec.grid[k - 1] < spec.grid[k])) throw std::invalid_argument("grid must be strictly increasing");
  }
  if (spec.grid.back() > 0.5) throw std::invalid_argument("grid must end at or below 1/2");
  if (spec.mode == SketchMode::equal_area) {
    for (int k = 0; k <= spec.n; ++k) {
      if (spec.grid[k] != -0.5 + static_cast<double>(k) / spec.n) {
        throw std::invalid_argument("equal-area grid must be uniform on [-1/2, 1/2]");
      }
    }
  }
  for (Index l = 0; l < spec.N(); ++l) {
    if (std::abs(spec.directions.points.row(l).norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("direction " + std::to_string(l) + " is not a unit vector");
    }
  }
}

double feature_value(std::span<const double> x, const FeatureIndex& idx, const SketchSpec& spec) {
  if (static_cast<int>(x.size()) != spec.dim()) throw DataError("input dimension does not match sketch");
  const double t = project(x.data(), spec.directions.points.row(idx.l - 1).data(), spec.dim());
  double acc = trapezoid(t, interval_trapezoid(spec, idx.k));
  for (int i = 1; i < spec.J; ++i) {
    acc = component_ops::prod2(acc, i <= idx.j ? t : 1.0, spec.components);
  }
  return acc;
}

Matrix design_matrix(const RowMatrix& X, const SketchSpec& spec, double slack) {
  const int d = spec.dim();
  if (X.rows() > 0 && X.cols() != d) {
    throw DataError("input has " + std::to_string(X.cols()) + " columns, sketch expects " + std::to_string(d));
  }
  const Index p = X.rows();
  for (Index i = 0; i < p; ++i) {
    if (X.row(i).norm() > 0.5 + slack) {
      throw DataError("row " + std::to_string(i) + " lies outside the ball of radius 1/2");
    }
  }

  const int J = spec.J;
  const int n = spec.n;
  const Index N = spec.N();
  Matrix phi(p, spec.dimension());
  std::vector<TrapezoidSpec> traps;
  traps.reserve(n);
  for (int k = 1; k <= n; ++k) traps.push_back(interval_trapezoid(spec, k));

#pragma omp parallel for schedule(static)
  for (Index i = 0; i < p; ++i) {
    std::vector<double> prefix(J);
    for (Index l = 0; l < N; ++l) {
      const double t = project(X.row(i).data(), spec.directions.points.row(l).data(), d);
      for (int k = 1; k <= n; ++k) {
        // prefix[j] = PG(...PG(T, t)..., t) with j copies of t
        prefix[0] = trapezoid(t, traps[k - 1]);
        for (int j = 1; j < J; ++j) prefix[j] = component_ops::prod2(prefix[j - 1], t, spec.components);
        for (int j = 0; j < J; ++j) {
          double v = prefix[j];
          for (int r = j + 1; r < J; ++r) v = component_ops::prod2(v, 1.0, spec.components);
          phi(i, (static_cast<Index>(j) * n + (k - 1)) * N + l) = v;
        }
      }
    }
  }
  return phi;
}

}  // namespace csketch
