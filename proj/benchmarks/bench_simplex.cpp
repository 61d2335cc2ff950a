#include <benchmark/benchmark.h>

#include <random>

#include "ratlas/simplex.hpp"

using namespace ratlas;

static void BM_MaxSlack(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    std::mt19937_64 gen(42);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<SignedConstraint> cs;
    for (int k = 0; k < m; ++k) {
        Eigen::VectorXd n(dim);
        for (int i = 0; i < dim; ++i) n(i) = normal(gen);
        cs.push_back({n, uni(gen), gen() % 2 ? 1 : -1});
    }
    for (auto _ : state) {
        auto r = max_slack(cs, dim, 1e4);
        benchmark::DoNotOptimize(r.max_slack);
    }
}
BENCHMARK(BM_MaxSlack)->Args({3, 6})->Args({6, 12})->Args({8, 24});
