#include <benchmark/benchmark.h>

#include "frachj/caputo.hpp"
#include "frachj/exact.hpp"
#include "frachj/solver.hpp"

using namespace frachj;

static void BM_WeightsClosedForm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weights(0.5, n, 1e-3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightsClosedForm)->RangeMultiplier(10)->Range(10, 100000)->Complexity();

static void BM_WeightSequence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    WeightSequence seq(0.5, 1e-3);
    for (std::size_t k = 0; k <= n; ++k) benchmark::DoNotOptimize(seq.advance());
  }
}
BENCHMARK(BM_WeightSequence)->Arg(1000)->Arg(10000);

// One Gⁿ evaluation with a history of `range(0)` levels on a 2D grid.
static void BM_GMap2D(benchmark::State& state) {
  const auto levels = static_cast<std::size_t>(state.range(0));
  SchemeOptions o;
  o.alpha = 0.8;
  o.dt = 1e-3;
  o.h = 0.05;
  o.threads = static_cast<unsigned>(state.range(1));
  const Scheme scheme(test1_problem(0.8, 2), o);
  const std::vector<GridFunction> hist(levels, scheme.initial_condition());
  const CaputoWeights w = weights(0.8, levels - 1, o.dt);
  for (auto _ : state) benchmark::DoNotOptimize(scheme.g_map(hist, w));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(scheme.grid().node_count()));
}
BENCHMARK(BM_GMap2D)->Args({10, 1})->Args({200, 1})->Args({200, 4})->Args({2000, 1})->Args({2000, 4});

static void BM_Solve1D(benchmark::State& state) {
  SchemeOptions o;
  o.alpha = 0.5;
  o.dt = 1e-3;
  o.h = 0.1;
  const Problem p = test2_problem(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, o, 0.2));
}
BENCHMARK(BM_Solve1D)->Unit(benchmark::kMillisecond);

static void BM_Solve2DFigureRun(benchmark::State& state) {
  SchemeOptions o;
  o.alpha = 0.8;
  o.dt = 1e-3;
  o.h = 0.1;
  o.threads = static_cast<unsigned>(state.range(0));
  const Problem p = test1_problem(0.8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, o, 0.2));
}
BENCHMARK(BM_Solve2DFigureRun)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_FCoefficients(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(f_coefficients(0.5, 400));
}
BENCHMARK(BM_FCoefficients);

BENCHMARK_MAIN();
