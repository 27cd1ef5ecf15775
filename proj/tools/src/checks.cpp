#include "checks.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include "csketch/components.hpp"
#include "csketch/csv.hpp"
#include "csketch/rng.hpp"

namespace csketch::cli {

namespace {

double trapezoid_reference(double t, double lo, double hi, double tau) {
  if (t <= lo - tau || t >= hi + tau) return 0.0;
  if (t < lo) return (t - (lo - tau)) / tau;
  if (t <= hi) return 1.0;
  return (hi + tau - t) / tau;
}

}  // namespace

std::vector<CheckRow> components_check(const CheckOptions& opt) {
  std::vector<CheckRow> rows;
  const double h = 1.0 / static_cast<double>(opt.grid - 1);

  double prev = 0.0;
  for (int m = opt.m_min; m <= opt.m_max; ++m) {
    double sup = 0.0;
    for (Index i = 0; i < opt.grid; ++i) {
      const double t = static_cast<double>(i) * h;
      sup = std::max(sup, std::abs(square_unit(t, m) - t * t));
    }
    const bool first = m == opt.m_min;
    CheckRow r{"square", m, 0.0, 0, sup, std::ldexp(1.0, -2 * m - 2), !first && sup > 0.0 ? prev / sup : 0.0, true};
    r.ok = std::abs(sup - r.reference) <= h && (first || sup < prev);
    rows.push_back(r);
    prev = sup;
  }

  Rng rng(derive_seed(opt.seed, 1));
  for (int J : opt.J) {
    std::vector<double> tuples(static_cast<std::size_t>(opt.tuples * J));
    for (double& v : tuples) v = rng.uniform_open(-1.0, 1.0);
    prev = 0.0;
    for (int m = opt.m_min; m <= opt.m_max; ++m) {
      const ComponentParams params(m, Interval{-1.0, 1.0});
      double sup = 0.0;
      for (Index s = 0; s < opt.tuples; ++s) {
        const std::span<const double> ts(tuples.data() + s * J, static_cast<std::size_t>(J));
        double exact = 1.0;
        for (double v : ts) exact *= v;
        sup = std::max(sup, std::abs(prodJ(ts, params) - exact));
      }
      const bool first = m == opt.m_min;
      CheckRow r{"product", m, 0.0, J, sup, prodJ_error_bound(J, params), !first && sup > 0.0 ? prev / sup : 0.0, true};
      r.ok = sup <= r.reference && (first || (sup > 0.0 && prev / sup >= 1.9));
      rows.push_back(r);
      prev = sup;
    }
  }

  for (double tau : opt.taus) {
    double sup = 0.0;
    for (int s = 0; s < 50; ++s) {
      const double lo = rng.uniform_open(-0.6, 0.4);
      const double hi = lo + rng.uniform_open(1e-3, 0.2);
      const TrapezoidSpec spec(lo, hi, tau);
      // a dense sweep plus every breakpoint
      const double a = lo - 2.0 * tau;
      const double b = hi + 2.0 * tau;
      for (int i = 0; i <= 4000; ++i) {
        const double t = a + (b - a) * i / 4000.0;
        sup = std::max(sup, std::abs(trapezoid(t, spec) - trapezoid_reference(t, lo, hi, tau)));
      }
      for (double t : {lo - tau, lo, hi, hi + tau}) {
        sup = std::max(sup, std::abs(trapezoid(t, spec) - trapezoid_reference(t, lo, hi, tau)));
      }
    }
    rows.push_back({"trapezoid", 0, tau, 0, sup, 0.0, 0.0, sup <= 1e-12});
  }
  return rows;
}

void write_check_csv(std::ostream& out, const std::vector<CheckRow>& rows) {
  out << "component,m,tau,J,sup_error,reference,ratio,ok\n";
  for (const CheckRow& r : rows) {
    out << r.component << ',' << r.m << ',' << format_double(r.tau) << ',' << r.J << ',' << format_double(r.sup_error)
        << ',' << format_double(r.reference) << ',' << format_double(r.ratio) << ',' << (r.ok ? 1 : 0) << '\n';
  }
}

}  // namespace csketch::cli
