#include <benchmark/benchmark.h>

#include "masforge/chat.hpp"
#include "testkit.hpp"

using namespace masforge;

static void BM_RunEpisode(benchmark::State& state) {
    ModelSpec m = testkit::load_model(testkit::models_dir() / "greenhouse.mas");
    EpisodeConfig c;
    c.ticks = static_cast<std::uint64_t>(state.range(0));
    c.seed = 3;
    for (auto _ : state) benchmark::DoNotOptimize(run_episode(m, c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunEpisode)->Arg(100)->Arg(1000);

static void BM_ChatScript(benchmark::State& state) {
    ModelSpec m = testkit::load_model(testkit::models_dir() / "chat.mas");
    auto script = parse_chat_script(testkit::read_text(testkit::golden_dir() / "chat_s1.script"), m);
    for (auto _ : state) benchmark::DoNotOptimize(run_chat_script(m, script.events));
}
BENCHMARK(BM_ChatScript);

BENCHMARK_MAIN();
