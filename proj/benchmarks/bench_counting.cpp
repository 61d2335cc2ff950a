#include <benchmark/benchmark.h>

#include "ratlas/arrangement.hpp"
#include "ratlas/graph.hpp"

using namespace ratlas;

static void BM_ExactOneLayer(benchmark::State& state) {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({1, static_cast<int>(state.range(0))});
    const auto params = init_kaiming(spec, 3);
    for (auto _ : state) {
        auto c = exact_count_one_layer(adj, params.weights[0], params.biases[0]);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_ExactOneLayer)->Arg(1)->Arg(2)->Arg(3);

static void BM_ExactTwoLayer(benchmark::State& state) {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({2, 2, static_cast<int>(state.range(0))});
    const auto params = init_kaiming(spec, 5);
    for (auto _ : state) {
        auto r = exact_count_multi(spec, adj, params);
        benchmark::DoNotOptimize(r.count);
    }
}
BENCHMARK(BM_ExactTwoLayer)->Arg(1)->Arg(2);
