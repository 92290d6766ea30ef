#include <benchmark/benchmark.h>

#include "pseudofrac/analysis.hpp"
#include "pseudofrac/energy.hpp"
#include "pseudofrac/geometry.hpp"

using namespace pseudofrac;

namespace {

std::shared_ptr<const Grid> ball_grid(int cells) {
  return std::make_shared<const Grid>(build_grid(DomainSpec::ball(1.0), 2.0 / cells, 0.01));
}

void BM_BuildGrid(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_grid(DomainSpec::ball(1.0), 2.0 / cells, 0.01));
}
BENCHMARK(BM_BuildGrid)->Arg(24)->Arg(48)->Arg(96);

void BM_BuildModel(benchmark::State& state) {
  const auto g = ball_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(EnergyModel(g, FracParams(0.5, 4.0)));
  state.counters["nodes"] = static_cast<double>(g->size());
}
BENCHMARK(BM_BuildModel)->Arg(24)->Arg(48);

void BM_Seminorm(benchmark::State& state) {
  const auto g = ball_grid(static_cast<int>(state.range(0)));
  const EnergyModel m(g, FracParams(0.5, static_cast<double>(state.range(1))));
  const GridFunction u = random_functions(g, 1, 0)[0];
  for (auto _ : state) benchmark::DoNotOptimize(m.seminorm(u).total);
  state.counters["terms"] = static_cast<double>(m.form().terms().size());
}
BENCHMARK(BM_Seminorm)->Args({24, 2})->Args({24, 32})->Args({48, 2})->Args({48, 32});

void BM_Gradient(benchmark::State& state) {
  const auto g = ball_grid(static_cast<int>(state.range(0)));
  const EnergyModel m(g, FracParams(0.5, 3.0));
  const GridFunction u = random_functions(g, 1, 0)[0];
  for (auto _ : state) benchmark::DoNotOptimize(m.energy_gradient(u));
}
BENCHMARK(BM_Gradient)->Arg(24)->Arg(48);

void BM_ComputeRs(benchmark::State& state) {
  const DomainSpec d = DomainSpec::rectangle(1.0, 0.5);
  const Grid g = build_grid(d, 0.02, 0.01);
  const auto method = state.range(0) == 0 ? BoundaryMethod::exact : BoundaryMethod::sampled;
  for (auto _ : state) benchmark::DoNotOptimize(compute_Rs(d, 0.5, g, method));
}
BENCHMARK(BM_ComputeRs)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
