#include "csketch/components.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csketch {

ComponentParams::ComponentParams(int m, Interval range) : m_(m), range_(range) {
  if (m < 1) throw std::invalid_argument("component depth m must be >= 1");
  if (!(range.lo < range.hi)) throw std::invalid_argument("operand range requires lo < hi");
}

TrapezoidSpec::TrapezoidSpec(double t_lo, double t_hi, double tau)
    : t_lo_(t_lo), t_hi_(t_hi), tau_(tau) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("trapezoid requires t_lo < t_hi");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("trapezoid requires 0 < tau <= 1");
}

double trapezoid(double t, const TrapezoidSpec& spec) { return component_ops::trapezoid(t, spec); }

double sawtooth(double t, int s) {
  if (s < 1) throw std::invalid_argument("sawtooth depth must be >= 1");
  return component_ops::sawtooth(t, s);
}

double square_unit(double t, int m) {
  if (m < 1) throw std::invalid_argument("square depth m must be >= 1");
  return component_ops::square_unit(t, m);
}

double square_scaled(double t, const ComponentParams& params) {
  return component_ops::square_scaled(t, params.range(), params.m());
}

double prod2(double t1, double t2, const ComponentParams& params) {
  return component_ops::prod2(t1, t2, params);
}

double prodJ(std::span<const double> ts, const ComponentParams& params) {
  if (ts.empty()) throw std::invalid_argument("prodJ needs at least one operand");
  double acc = ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) acc = component_ops::prod2(acc, ts[i], params);
  return acc;
}

double prod2_error_bound(const ComponentParams& params) {
  const double w = params.range().width();
  return 1.5 * w * w * std::ldexp(1.0, -2 * params.m() - 2);
}

double prodJ_error_bound(int J, const ComponentParams& params) {
  if (J < 1) throw std::invalid_argument("prodJ order must be >= 1");
  const double reach = std::max(std::abs(params.range().lo), std::abs(params.range().hi));
  // e_{i+1} <= eps2 + reach * e_i, e_1 = 0
  double bound = 0.0;
  for (int i = 1; i < J; ++i) bound = prod2_error_bound(params) + reach * bound;
  return bound;
}

}  // namespace csketch
