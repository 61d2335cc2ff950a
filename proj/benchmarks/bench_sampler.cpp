#include <benchmark/benchmark.h>

#include "ratlas/graph.hpp"
#include "ratlas/sampler.hpp"

using namespace ratlas;

static void BM_EstimateRegions(benchmark::State& state) {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({2, 2, 3});
    const auto params = init_kaiming(spec, 7);
    SamplingConfig cfg{Distribution::normal(1.0), state.range(0), 11, 65536};
    for (auto _ : state) {
        auto rep = estimate_regions(spec, adj, params, cfg);
        benchmark::DoNotOptimize(rep.samples_used);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateRegions)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
