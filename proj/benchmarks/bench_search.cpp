#include <benchmark/benchmark.h>

#include "relnas/generators.hpp"
#include "relnas/rewire.hpp"

using namespace relnas;

namespace {

RegressionModel degree_model() {
    RegressionModel m;
    m.features = {"average_degree", "clustering_coefficient"};
    m.coefficients = {0.5, 1.0};
    m.means = {0.0, 0.0};
    m.stddevs = {1.0, 1.0};
    return m;
}

void BM_Propose(benchmark::State& state) {
    const Graph g = generate(GeneratorSpec::ws_flex(64, 8.0, 0.3, 99));
    const RewireOpKind kind = static_cast<RewireOpKind>(state.range(0));
    Rng rng = make_rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(propose(g, kind, rng));
    }
}
BENCHMARK(BM_Propose)->Arg(0)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_SearchStep(benchmark::State& state) {
    const Graph g0 = generate(GeneratorSpec::ws_flex(static_cast<int>(state.range(0)), 6.0,
                                                     0.2, 41));
    const RegressionModel model = degree_model();
    SearchConfig config;
    config.epsilon = 0.01;
    config.max_steps = 5;
    config.max_proposals_per_step = 100;
    config.mode = SearchMode::Maximize;
    for (auto _ : state) {
        config.seed++;
        benchmark::DoNotOptimize(search(g0, model, config));
    }
}
BENCHMARK(BM_SearchStep)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_WsFlexGenerate(benchmark::State& state) {
    GeneratorSpec spec = GeneratorSpec::ws_flex(64, static_cast<double>(state.range(0)), 0.4, 7);
    for (auto _ : state) {
        spec.seed++;
        benchmark::DoNotOptimize(generate(spec));
    }
}
BENCHMARK(BM_WsFlexGenerate)->Arg(4)->Arg(16)->Arg(48)->Unit(benchmark::kMicrosecond);

}  // namespace
