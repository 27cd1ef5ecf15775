#include <benchmark/benchmark.h>

#include "csketch/solver.hpp"

namespace {

using namespace csketch;

void run(benchmark::State& state, SolveRoute route, double lambda) {
  const Index p = state.range(0);
  const Index q = state.range(1);
  std::srand(3);
  const Matrix phi = Matrix::Random(p, q);
  const Vector y = Vector::Random(p);
  FitOptions opt;
  opt.route = route;
  opt.lambda = lambda;
  for (auto _ : state) benchmark::DoNotOptimize(fit(phi, y, opt));
}

void BM_Primal(benchmark::State& state) { run(state, SolveRoute::primal, 0.0); }
void BM_Gram(benchmark::State& state) { run(state, SolveRoute::gram, 0.0); }
void BM_RidgeGram(benchmark::State& state) { run(state, SolveRoute::gram, 1e-6); }

BENCHMARK(BM_Primal)->Args({400, 200})->Args({400, 800})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gram)->Args({400, 800})->Args({400, 1600})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RidgeGram)->Args({400, 1600})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
