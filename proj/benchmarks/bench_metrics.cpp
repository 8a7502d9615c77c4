#include <benchmark/benchmark.h>

#include "relnas/generators.hpp"
#include "relnas/metrics.hpp"

using namespace relnas;

namespace {

Graph pool_graph(int n, double degree) {
    return generate(GeneratorSpec::ws_flex(n, degree, 0.3, 12345));
}

void BM_Featurize(benchmark::State& state) {
    const Graph g = pool_graph(static_cast<int>(state.range(0)),
                               static_cast<double>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(featurize(g, 7));
    }
}
BENCHMARK(BM_Featurize)
    ->Args({16, 4})
    ->Args({32, 8})
    ->Args({64, 8})
    ->Args({64, 32})
    ->Unit(benchmark::kMillisecond);

void BM_VertexConnectivityPair(benchmark::State& state) {
    const Graph g = pool_graph(64, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_flow_vertex_connectivity(g, 0, 32));
    }
}
BENCHMARK(BM_VertexConnectivityPair)->Arg(8)->Arg(32)->Arg(60);

void BM_Betweenness(benchmark::State& state) {
    const Graph g = pool_graph(static_cast<int>(state.range(0)), 8.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(betweenness_metrics(g));
    }
}
BENCHMARK(BM_Betweenness)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_CommunityMetrics(benchmark::State& state) {
    const Graph g = pool_graph(static_cast<int>(state.range(0)), 8.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(community_metrics(g, 7));
    }
}
BENCHMARK(BM_CommunityMetrics)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_SpectralMetrics(benchmark::State& state) {
    const Graph g = pool_graph(static_cast<int>(state.range(0)), 8.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_metrics(g));
    }
}
BENCHMARK(BM_SpectralMetrics)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
