#include <benchmark/benchmark.h>

#include "masforge/modelc/scaffold.hpp"
#include "testkit.hpp"

using namespace masforge;

static void BM_Compile(benchmark::State& state) {
    std::string text = testkit::random_model(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(testkit::compile_text(text));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Compile)->Arg(1)->Arg(7)->Arg(42);

static void BM_PimToPsm(benchmark::State& state) {
    ModelSpec m = testkit::load_model(testkit::models_dir() / "delivery.mas");
    for (auto _ : state) benchmark::DoNotOptimize(pim_to_psm(m));
}
BENCHMARK(BM_PimToPsm);

BENCHMARK_MAIN();
