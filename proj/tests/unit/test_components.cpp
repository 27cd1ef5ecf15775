#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "csketch/components.hpp"

namespace {

using namespace csketch;

// Scalar that counts the primitives on every path to it (shared subterms
// count once per use). Only relu, addition and
// multiplication by a plain double are defined, so a component that needed
// anything else would not compile for this type.
struct Trace {
  double v = 0.0;
  int relus = 0;
  int adds = 0;
  int scales = 0;

  Trace() = default;
  Trace(double x) : v(x) {}  // NOLINT: constants enter as leaves
};

Trace merge(const Trace& a, const Trace& b, double v) {
  Trace t(v);
  t.relus = a.relus + b.relus;
  t.adds = a.adds + b.adds + 1;
  t.scales = a.scales + b.scales;
  return t;
}

Trace relu(const Trace& a) {
  Trace t = a;
  t.v = a.v > 0.0 ? a.v : 0.0;
  ++t.relus;
  return t;
}
Trace operator+(const Trace& a, const Trace& b) { return merge(a, b, a.v + b.v); }
Trace operator-(const Trace& a, const Trace& b) { return merge(a, b, a.v - b.v); }
Trace operator+(const Trace& a, double c) { return a + Trace(c); }
Trace operator-(const Trace& a, double c) { return a - Trace(c); }
Trace operator*(const Trace& a, double c) {
  Trace t = a;
  t.v = a.v * c;
  ++t.scales;
  return t;
}
Trace operator/(const Trace& a, double c) {
  Trace t = a;
  t.v = a.v / c;
  ++t.scales;
  return t;
}

TEST(Relu, Examples) {
  EXPECT_EQ(csketch::relu(0.0), 0.0);
  EXPECT_EQ(csketch::relu(-2.5), 0.0);
  EXPECT_EQ(csketch::relu(3.0), 3.0);
}

TEST(Trapezoid, Examples) {
  const TrapezoidSpec s(-0.2, 0.3, 0.1);
  EXPECT_DOUBLE_EQ(trapezoid(-0.2, s), 1.0);
  EXPECT_NEAR(trapezoid(0.4, s), 0.0, 1e-15);
  EXPECT_NEAR(trapezoid(0.35, s), 0.5, 1e-12);
}

TEST(Trapezoid, RejectsBadSpecs) {
  EXPECT_THROW(TrapezoidSpec(0.3, 0.3, 0.1), std::invalid_argument);
  EXPECT_THROW(TrapezoidSpec(0.0, 0.3, 0.0), std::invalid_argument);
  EXPECT_THROW(TrapezoidSpec(0.0, 0.3, 1.5), std::invalid_argument);
}

double piecewise(double t, double lo, double hi, double tau) {
  if (t >= lo && t <= hi) return 1.0;
  if (t <= lo - tau || t >= hi + tau) return 0.0;
  if (t < lo) return (t - lo + tau) / tau;
  return (hi + tau - t) / tau;
}

TEST(Trapezoid, MatchesPiecewiseBranches) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (double tau : {0.5, 0.1, 0.01, 0.001}) {
    for (int rep = 0; rep < 50; ++rep) {
      double a = U(rng), b = U(rng);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-6) continue;
      const TrapezoidSpec s(a, b, tau);
      int hit[4] = {0, 0, 0, 0};
      for (int i = 0; i <= 4000; ++i) {
        const double t = a - 2 * tau + (b - a + 4 * tau) * i / 4000.0;
        EXPECT_NEAR(trapezoid(t, s), piecewise(t, a, b, tau), 1e-12);
        hit[t < a - tau || t > b + tau ? 0 : t < a ? 1 : t <= b ? 2 : 3]++;
      }
      for (int h : hit) EXPECT_GT(h, 0);
    }
  }
}

TEST(Sawtooth, Examples) {
  for (int s = 1; s <= 6; ++s) EXPECT_EQ(sawtooth(0.0, s), 0.0);
  EXPECT_EQ(sawtooth(0.5, 1), 1.0);
  EXPECT_EQ(sawtooth(0.25, 2), 1.0);
  EXPECT_THROW(sawtooth(0.1, 0), std::invalid_argument);
}

TEST(SquareUnit, Examples) {
  for (int m = 1; m <= 5; ++m) EXPECT_EQ(square_unit(0.0, m), 0.0);
  EXPECT_EQ(square_unit(0.5, 1), 0.25);
  EXPECT_EQ(square_unit(0.25, 2), 0.0625);
  // exact rational evaluation
  EXPECT_NEAR(square_unit(0.3, 4), 0.090625, 1e-15);
}

TEST(SquareUnit, ExactAtDyadicPoints) {
  for (int m = 1; m <= 10; ++m) {
    const int K = 1 << m;
    for (int i = 0; i <= K; ++i) {
      const double t = std::ldexp(i, -m);
      ASSERT_EQ(square_unit(t, m), t * t) << "m=" << m << " i=" << i;
    }
  }
}

TEST(SquareUnit, SupErrorLaw) {
  double previous = 1.0;
  for (int m = 1; m <= 10; ++m) {
    double sup = 0.0;
    for (int i = 0; i <= 100000; ++i) {
      const double t = i / 100000.0;
      sup = std::max(sup, std::abs(square_unit(t, m) - t * t));
    }
    EXPECT_NEAR(sup, std::ldexp(1.0, -2 * m - 2), 1e-5) << "m=" << m;
    EXPECT_LT(sup, previous);
    previous = sup;
  }
}

TEST(SquareScaled, EndpointsAndBound) {
  const ComponentParams p(3, {-2.0, 2.0});
  EXPECT_EQ(square_scaled(-2.0, p), 4.0);
  EXPECT_EQ(square_scaled(2.0, p), 4.0);
  EXPECT_NEAR(square_scaled(0.3, p), 0.15, 1e-14);
  EXPECT_LE(std::abs(square_scaled(0.3, p) - 0.09), 16.0 * std::ldexp(1.0, -8));
  for (int i = 0; i <= 1000; ++i) {
    const double t = -2.0 + 4.0 * i / 1000.0;
    EXPECT_LE(std::abs(square_scaled(t, p) - t * t), 16.0 * std::ldexp(1.0, -8) + 1e-15);
  }
}

TEST(ComponentParams, Validates) {
  EXPECT_THROW(ComponentParams(0), std::invalid_argument);
  EXPECT_THROW(ComponentParams(3, {1.0, 1.0}), std::invalid_argument);
}

TEST(Prod2, Examples) {
  const ComponentParams unit(4, {0.0, 1.0});
  const ComponentParams wide(4, {-2.0, 2.0});
  EXPECT_EQ(prod2(-2.0, -2.0, wide), 4.0);
  for (int m = 1; m <= 8; ++m) EXPECT_EQ(prod2(0.5, 0.5, ComponentParams(m, {0.0, 1.0})), 0.25);
  for (double t : {0.0, 0.1, 0.37, 0.5, 0.99}) EXPECT_EQ(prod2(t, 0.0, unit), 0.0);
  EXPECT_NEAR(prod2(0.37, -0.21, ComponentParams(5, {-2.0, 2.0})), -0.078125, 1e-13);
}

TEST(Prod2, SymmetricBitExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int m : {1, 4, 9, 20}) {
    const ComponentParams p(m);
    for (int i = 0; i < 2000; ++i) {
      const double a = U(rng), b = U(rng);
      ASSERT_EQ(prod2(a, b, p), prod2(b, a, p));
    }
  }
}

TEST(ProdJ, Examples) {
  const ComponentParams p(8, {0.0, 1.0});
  const std::array<double, 1> one{0.731};
  EXPECT_EQ(prodJ(one, p), 0.731);
  const std::array<double, 3> halves{0.5, 0.5, 0.5};
  EXPECT_LE(std::abs(prodJ(halves, p) - 0.125), 3.0 * std::ldexp(1.0, -8));
  const std::array<double, 3> ones{1.0, 1.0, 1.0};
  const ComponentParams wide(8, {-2.0, 2.0});
  EXPECT_LE(std::abs(prodJ(ones, wide) - 1.0), prodJ_error_bound(3, wide));
  const std::array<double, 3> mixed{0.3, -0.7, 0.9};
  EXPECT_NEAR(prodJ(mixed, ComponentParams(6)), -0.189990234375, 1e-13);
  EXPECT_THROW(prodJ(std::span<const double>(), p), std::invalid_argument);
}

TEST(ProdJ, BoundAndGeometricDecay) {
  for (int J : {2, 3, 5}) {
    std::mt19937_64 rng(100 + J);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<std::vector<double>> tuples(10000, std::vector<double>(J));
    for (auto& t : tuples)
      for (double& x : t) x = U(rng);
    double previous = 0.0;
    for (int m = 1; m <= 10; ++m) {
      const ComponentParams p(m);
      double worst = 0.0;
      for (const auto& t : tuples) {
        double exact = 1.0;
        for (double x : t) exact *= x;
        worst = std::max(worst, std::abs(prodJ(t, p) - exact));
      }
      EXPECT_LE(worst, prodJ_error_bound(J, p));
      if (m > 1) EXPECT_GE(previous / worst, 1.9) << "J=" << J << " m=" << m;
      previous = worst;
    }
  }
}

TEST(Structure, ComponentsUseOnlyReluSumsAndScaling) {
  const TrapezoidSpec spec(-0.1, 0.2, 0.05);
  const ComponentParams params(6);
  for (double x : {-0.4, -0.12, 0.0, 0.07, 0.22, 0.45}) {
    const Trace t(x);
    const Trace tr = component_ops::trapezoid(t, spec);
    EXPECT_EQ(tr.v, trapezoid(x, spec));
    EXPECT_EQ(tr.relus, 4);

    const Trace sq = component_ops::square_unit(Trace(std::abs(x)), 6);
    EXPECT_EQ(sq.v, square_unit(std::abs(x), 6));
    EXPECT_GE(sq.relus, 2 * 6);

    const Trace pr = component_ops::prod2(t, Trace(0.3), params);
    EXPECT_EQ(pr.v, prod2(x, 0.3, params));
    EXPECT_GE(pr.relus, 2 * (7 + 6 + 6));

    // left-nested order-4 product through the same pathway
    Trace acc = tr;
    for (const Trace& next : {t, Trace(1.0), Trace(1.0)}) acc = component_ops::prod2(acc, next, params);
    const std::array<double, 4> ts{trapezoid(x, spec), x, 1.0, 1.0};
    EXPECT_EQ(acc.v, prodJ(ts, params));
    EXPECT_GT(acc.relus, 0);
  }
}

}  // namespace
