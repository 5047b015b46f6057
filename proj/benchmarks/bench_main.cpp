#include <benchmark/benchmark.h>

#include "wander/curve.hpp"
#include "wander/grid.hpp"

namespace {

void bm_curve_eval(benchmark::State& state) {
  auto c = wander::BoundaryCurve::wobbly_circle(0.01, 3);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(c.eval(t));
    t += 0.001;
  }
}
BENCHMARK(bm_curve_eval);

void bm_grid_fill(benchmark::State& state) {
  int n = int(state.range(0));
  wander::ComplexGrid g({-1.0, -1.0}, 2.0 / n, n, n);
  for (auto _ : state) {
    g.fill([](wander::Complex z) { return z * z + std::exp(z); }, 1);
    benchmark::DoNotOptimize(g.data().data());
  }
}
BENCHMARK(bm_grid_fill)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
