#include <benchmark/benchmark.h>

#include "testkit.hpp"

using namespace masforge;

static void BM_FilterDesires(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::vector<testkit::FilterInstance> instances;
    for (int i = 0; i < 256; ++i) instances.push_back(testkit::random_filter_instance(rng, state.range(0)));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(filter_desires(instances[i++ & 255].desires, {}));
    }
}
BENCHMARK(BM_FilterDesires)->Arg(4)->Arg(12)->Arg(20);

static void BM_ReviseBeliefs(benchmark::State& state) {
    std::mt19937_64 rng(2);
    auto percepts = testkit::random_percepts(rng, 16, static_cast<std::size_t>(state.range(0)), 50);
    for (auto _ : state) benchmark::DoNotOptimize(revise_beliefs(percepts, {}, {}));
}
BENCHMARK(BM_ReviseBeliefs)->Arg(16)->Arg(256);

BENCHMARK_MAIN();
