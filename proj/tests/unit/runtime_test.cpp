#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "masforge/runtime.hpp"
#include "testkit.hpp"

using namespace masforge;

namespace {

const char* kCounter = R"(model Counter
environment Room {
  deterministic: true
  static: false
  continuous: false
  state count: int = 0
  drift count := count + 1
  perception count: int
}
agent Watcher: reactive {
  perception count: int from environment
  perception poke: int from agent
  rule on poke(n) => bump(n)
}
action bump by Watcher (n: int) {
  count := count + n
}
)";

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(RunEpisode, ZeroTicksYieldsTheInitialRecordOnly) {
    ModelSpec m = testkit::model_of(kCounter);
    EpisodeConfig c;
    c.ticks = 0;
    Trace t = run_episode(m, c);
    ASSERT_EQ(t.records.size(), 1u);
    EXPECT_EQ(t.records[0].tick, 0u);
    EXPECT_EQ(t.records[0].state.values.at("count"), Value::integer(0));
}

TEST(RunEpisode, DriftAdvancesEveryTick) {
    ModelSpec m = testkit::model_of(kCounter);
    EpisodeConfig c;
    c.ticks = 5;
    Trace t = run_episode(m, c);
    ASSERT_EQ(t.records.size(), 6u);
    for (std::uint64_t i = 0; i <= 5; ++i) {
        EXPECT_EQ(t.records[i].tick, i);
        EXPECT_EQ(t.records[i].state.values.at("count"), Value::integer(i));
    }
}

TEST(RunEpisode, StimulusTriggersAnAction) {
    ModelSpec m = testkit::model_of(kCounter);
    auto script = parse_stimulus_script("2 Watcher poke 10\n", m);
    ASSERT_TRUE(script.report.passes());
    EpisodeConfig c;
    c.ticks = 3;
    c.stimuli = script.stimuli;
    Trace t = run_episode(m, c);
    ASSERT_EQ(t.records[2].actions.size(), 1u);
    EXPECT_EQ(t.records[2].actions[0].action, "bump");
    EXPECT_EQ(t.records[2].state.values.at("count"), Value::integer(12));
    EXPECT_EQ(t.records[3].state.values.at("count"), Value::integer(13));
}

TEST(RunEpisode, SameSeedSameTrace) {
    ModelSpec m = testkit::load_model(testkit::models_dir() / "greenhouse.mas");
    EpisodeConfig c;
    c.ticks = 50;
    c.seed = 9;
    EXPECT_EQ(serialize(run_episode(m, c)), serialize(run_episode(m, c)));
}

TEST(RunEpisode, SeedMattersForNondeterministicModels) {
    ModelSpec m = testkit::load_model(testkit::models_dir() / "greenhouse.mas");
    EpisodeConfig a;
    a.ticks = 50;
    a.seed = 1;
    EpisodeConfig b = a;
    b.seed = 2;
    EXPECT_NE(serialize(run_episode(m, a)), serialize(run_episode(m, b)));
}

TEST(Serialize, OneSortedJsonLinePerRecord) {
    ModelSpec m = testkit::load_model(testkit::models_dir() / "delivery.mas");
    EpisodeConfig c;
    c.ticks = 8;
    Trace t = run_episode(m, c);
    auto ls = lines(serialize(t));
    ASSERT_EQ(ls.size(), t.records.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
        auto j = nlohmann::json::parse(ls[i]);
        EXPECT_EQ(j.at("tick").get<std::uint64_t>(), i);
        EXPECT_EQ(j.dump(), ls[i]);
    }
}

TEST(Simulation, StepMatchesRunEpisode) {
    ModelSpec m = testkit::load_model(testkit::models_dir() / "delivery.mas");
    EpisodeConfig c;
    c.ticks = 6;
    Simulation sim(m, c);
    for (int i = 0; i < 6; ++i) sim.step();
    EXPECT_EQ(serialize(sim.trace()), serialize(run_episode(m, c)));
}

TEST(Simulation, MessagesArriveOneTickLater) {
    ModelSpec m = testkit::load_model(testkit::models_dir() / "delivery.mas");
    EpisodeConfig c;
    c.ticks = 12;
    Trace t = run_episode(m, c);
    std::size_t sent = 0;
    for (std::size_t i = 1; i < t.records.size(); ++i) {
        for (const auto& msg : t.records[i].sent) {
            EXPECT_EQ(msg.sent_tick, t.records[i].tick);
            ++sent;
        }
        for (const auto& msg : t.records[i].delivered) EXPECT_EQ(msg.sent_tick + 1, t.records[i].tick);
    }
    EXPECT_GT(sent, 0u);
}

TEST(StimulusScript, ReportsEachBadLine) {
    ModelSpec m = testkit::model_of(kCounter);
    auto s = parse_stimulus_script("# header\n0 Watcher poke 1\n1 Nobody poke 1\n2 Watcher missing 1\n"
                                   "3 Watcher poke many\n4 Watcher poke 2\n",
                                   m, "s.txt");
    EXPECT_EQ(s.report.error_count(), 4u);
    ASSERT_EQ(s.stimuli.size(), 1u);
    EXPECT_EQ(s.stimuli[0].tick, 4u);
    EXPECT_TRUE(s.report.has("E-UNKNOWN-AGENT"));
    EXPECT_TRUE(s.report.has("E-UNRESOLVED-PERCEPT"));
    std::vector<int> where;
    for (const auto& d : s.report.diagnostics) where.push_back(d.loc.line);
    EXPECT_EQ(where, (std::vector<int>{2, 3, 4, 5}));
}

TEST(StimulusScript, SortsByTickStably) {
    ModelSpec m = testkit::model_of(kCounter);
    auto s = parse_stimulus_script("3 Watcher poke 1\n1 Watcher poke 2\n3 Watcher poke 3\n", m);
    ASSERT_EQ(s.stimuli.size(), 3u);
    EXPECT_EQ(s.stimuli[0].value, Value::integer(2));
    EXPECT_EQ(s.stimuli[1].value, Value::integer(1));
    EXPECT_EQ(s.stimuli[2].value, Value::integer(3));
}

TEST(RunEpisode, RandomModelsRunWithoutErrors) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        ModelSpec m = testkit::model_of(testkit::random_model(seed));
        EpisodeConfig c;
        c.ticks = 60;
        c.seed = seed;
        EXPECT_NO_THROW(run_episode(m, c)) << seed;
    }
}
