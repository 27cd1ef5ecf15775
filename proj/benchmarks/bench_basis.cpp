#include <benchmark/benchmark.h>

#include "csketch/basis.hpp"
#include "csketch/data.hpp"

namespace {

using namespace csketch;

// rows x (J n N) design matrix on d = 3
void BM_DesignMatrix(benchmark::State& state) {
  SketchConfig cfg;
  cfg.J = static_cast<int>(state.range(0));
  cfg.n = 8;
  cfg.N = static_cast<int>(state.range(1));
  cfg.tau = 0.1;
  cfg.m = 20;
  const SketchSpec spec = make_spec(cfg);
  const RowMatrix X = sample_ball(3, 1000, 7);
  for (auto _ : state) benchmark::DoNotOptimize(design_matrix(X, spec));
  state.counters["columns"] = static_cast<double>(spec.dimension());
}
BENCHMARK(BM_DesignMatrix)->ArgsProduct({{1, 3}, {20, 80}})->Unit(benchmark::kMillisecond);

void BM_EqPoints(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eq_points(3, N));
}
BENCHMARK(BM_EqPoints)->Arg(40)->Arg(400)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
