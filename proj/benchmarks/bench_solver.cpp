#include <benchmark/benchmark.h>

#include "pseudofrac/eigensolver.hpp"
#include "pseudofrac/geometry.hpp"

using namespace pseudofrac;

namespace {

void BM_Minimize(benchmark::State& state) {
  const auto g = std::make_shared<const Grid>(
      build_grid(DomainSpec::rectangle(0.5, 0.5), 1.0 / static_cast<double>(state.range(0)), 0.01));
  const FracParams params(0.5, static_cast<double>(state.range(1)));
  SolverConfig c;
  c.direction = state.range(2) == 0 ? DescentDirection::gradient : DescentDirection::lbfgs;
  int iterations = 0;
  for (auto _ : state) {
    const EigenResult r = minimize_rayleigh(g, params, c);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.lambda);
  }
  state.counters["iterations"] = iterations;
}
BENCHMARK(BM_Minimize)
    ->Args({12, 2, 0})
    ->Args({12, 2, 1})
    ->Args({12, 4, 0})
    ->Args({12, 4, 1})
    ->Args({24, 3, 1})
    ->Unit(benchmark::kMillisecond);

void BM_DenseOracle(benchmark::State& state) {
  const auto g = std::make_shared<const Grid>(
      build_grid(DomainSpec::rectangle(0.5, 0.5), 1.0 / static_cast<double>(state.range(0)), 0.01));
  for (auto _ : state) benchmark::DoNotOptimize(dense_p2_oracle(g, 0.5).lambda);
}
BENCHMARK(BM_DenseOracle)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
