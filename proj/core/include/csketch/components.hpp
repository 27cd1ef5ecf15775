#pragma once

#include <span>

namespace csketch {

/// Closed interval [lo, hi] of admissible operands for a square or product component.
struct Interval {
  double lo = -2.0;
  double hi = 2.0;

  double width() const { return hi - lo; }
  bool contains(double t) const { return lo <= t && t <= hi; }
};

/// Depth m and operand range shared by the square and product components.
class ComponentParams {
 public:
  ComponentParams(int m, Interval range = {});

  int m() const { return m_; }
  const Interval& range() const { return range_; }

  /// Range used for the operand t1 + t2 inside prod2.
  Interval doubled_range() const { return {2.0 * range_.lo, 2.0 * range_.hi}; }

 private:
  int m_;
  Interval range_;
};

/// Trapezoid T with plateau [t_lo, t_hi] and ramps of width tau.
class TrapezoidSpec {
 public:
  TrapezoidSpec(double t_lo, double t_hi, double tau);

  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  double tau() const { return tau_; }

 private:
  double t_lo_;
  double t_hi_;
  double tau_;
};

inline double relu(double t) { return t > 0.0 ? t : 0.0; }

// The evaluators below are written once against a generic scalar so that the
// same code path can be instrumented in tests. A scalar type S must provide
// S+S, S-S, S+double, S-double, S*double, S/double and an ADL-visible relu(S);
// nothing else is used, which is what makes every component a ReLU network.
namespace component_ops {

template <class S>
S trapezoid(const S& t, const TrapezoidSpec& spec) {
  return (relu(t - spec.t_lo() + spec.tau()) - relu(t - spec.t_lo()) - relu(t - spec.t_hi()) +
          relu(t - spec.t_hi() - spec.tau())) /
         spec.tau();
}

/// g(t) = 2 relu(t) - 4 relu(t - 1/2)
template <class S>
S tooth(const S& t) {
  return relu(t) * 2.0 - relu(t - 0.5) * 4.0;
}

template <class S>
S sawtooth(S t, int s) {
  for (int i = 0; i < s; ++i) t = tooth(t);
  return t;
}

/// t - sum_{s=1..m} g_s(t) / 4^s, accumulated in order of increasing s.
template <class S>
S square_unit(const S& t, int m) {
  S result = t;
  S g = t;
  double weight = 1.0;
  for (int s = 1; s <= m; ++s) {
    g = tooth(g);
    weight *= 0.25;
    result = result - g * weight;
  }
  return result;
}

template <class S>
S square_scaled(const S& t, const Interval& range, int m) {
  const double w = range.width();
  const S u = (t - range.lo) / w;
  return square_unit(u, m) * (w * w) + u * (2.0 * range.lo * w) + range.lo * range.lo;
}

// The sum operand lives on the doubled range; one extra level keeps its
// interpolation nodes at the same spacing as those of the single operands.
template <class S>
S prod2(const S& t1, const S& t2, const ComponentParams& params) {
  const S sum_sq = square_scaled(t1 + t2, params.doubled_range(), params.m() + 1);
  const S sq1 = square_scaled(t1, params.range(), params.m());
  const S sq2 = square_scaled(t2, params.range(), params.m());
  return (sum_sq - (sq1 + sq2)) * 0.5;
}

}  // namespace component_ops

double trapezoid(double t, const TrapezoidSpec& spec);

/// s-fold composition of g(t) = 2 relu(t) - 4 relu(t - 1/2); requires s >= 1.
double sawtooth(double t, int s);

/// Piecewise-linear interpolant of t^2 on the dyadic nodes i / 2^m of [0, 1].
double square_unit(double t, int m);

/// Square component for operands in params.range(); error at most
/// width^2 * 2^(-2m-2) there.
double square_scaled(double t, const ComponentParams& params);

/// Product component built from three squares; symmetric bit-for-bit.
double prod2(double t1, double t2, const ComponentParams& params);

/// Left-nested product PG(...PG(PG(t1, t2), t3)..., tJ). Throws on empty input.
double prodJ(std::span<const double> ts, const ComponentParams& params);

/// Upper bound on |prod2(t1, t2) - t1 t2| for operands in the range.
double prod2_error_bound(const ComponentParams& params);

/// Upper bound on |prodJ - t1...tJ| for a J-tuple from the range, assuming
/// the intermediate products also stay in the range (true when the range
/// lies inside [-1, 1]).
double prodJ_error_bound(int J, const ComponentParams& params);

}  // namespace csketch
