#include <benchmark/benchmark.h>

#include "ergkit/glauber.hpp"
#include "ergkit/graph_core.hpp"
#include "ergkit/meanfield_exact.hpp"
#include "ergkit/rng.hpp"
#include "ergkit/scalar_landscape.hpp"

namespace {

using namespace ergkit;

void BM_GlauberStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GlauberChain chain(n, {1.0, 1.0}, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain.step());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GlauberStep)->Arg(32)->Arg(150)->Arg(1024);

void BM_CommonNeighborCount(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const AdjacencyState g = AdjacencyState::bernoulli(n, 0.5, 7);
  Xoshiro256pp rng(8);
  for (auto _ : state) {
    const int a = static_cast<int>(rng.bounded(n));
    int b = static_cast<int>(rng.bounded(n - 1));
    if (b >= a) ++b;
    benchmark::DoNotOptimize(g.common_neighbor_count(a, b));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CommonNeighborCount)->Arg(150)->Arg(1024)->Arg(4096);

void BM_FlipEdge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  AdjacencyState g = AdjacencyState::bernoulli(n, 0.5, 9);
  Xoshiro256pp rng(10);
  for (auto _ : state) {
    const int a = static_cast<int>(rng.bounded(n));
    int b = static_cast<int>(rng.bounded(n - 1));
    if (b >= a) ++b;
    benchmark::DoNotOptimize(g.flip_edge(a, b));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FlipEdge)->Arg(150)->Arg(1024);

void BM_BuildPmf(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_pmf(n, {1.0, 0.5}));
  }
}
BENCHMARK(BM_BuildPmf)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FindMaximizers(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_maximizers({4.0, -1.1}));
  }
}
BENCHMARK(BM_FindMaximizers)->Unit(benchmark::kMicrosecond);

void BM_TraceCurvePoint(benchmark::State& state) {
  const std::vector<double> grid{5.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_critical_curve(grid));
  }
}
BENCHMARK(BM_TraceCurvePoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
