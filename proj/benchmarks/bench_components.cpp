#include <benchmark/benchmark.h>

#include <array>

#include "csketch/components.hpp"

namespace {

using namespace csketch;

void BM_SquareUnit(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  double t = 0.123;
  for (auto _ : state) {
    benchmark::DoNotOptimize(square_unit(t, m));
    t = t < 0.9 ? t + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_SquareUnit)->DenseRange(4, 20, 4);

void BM_ProdJ(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const ComponentParams params(20);
  std::array<double, 8> ts{0.3, -0.2, 0.7, 1.0, 1.0, 1.0, 1.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(prodJ(std::span<const double>(ts.data(), static_cast<std::size_t>(J)), params));
    ts[0] = ts[0] < 0.9 ? ts[0] + 1e-3 : -0.9;
  }
}
BENCHMARK(BM_ProdJ)->DenseRange(1, 5);

void BM_Trapezoid(benchmark::State& state) {
  const TrapezoidSpec spec(-0.1, 0.1, 0.05);
  double t = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trapezoid(t, spec));
    t = t < 0.5 ? t + 1e-3 : -0.5;
  }
}
BENCHMARK(BM_Trapezoid);

}  // namespace

BENCHMARK_MAIN();
