#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "masforge/agents.hpp"
#include "masforge/diagnostics.hpp"

namespace masforge {

/// An externally injected percept: at `tick`, `agent` perceives `name`.
struct Stimulus {
    std::uint64_t tick = 0;
    std::string agent;
    std::string name;
    Value value;
    SourceLoc loc;

    bool operator==(const Stimulus&) const = default;
};

/// Source name carried by injected percepts.
inline constexpr std::string_view kUserSource = "user";

struct EpisodeConfig {
    std::uint64_t ticks = 10;
    std::uint64_t seed = 0;
    StepConfig step;
    CognitionConfig cognition;
    std::vector<Stimulus> stimuli;
};

struct AgentPercept {
    std::string agent;
    Percept percept;
};

struct TickRecord {
    std::uint64_t tick = 0;
    EnvState state;
    std::vector<AgentPercept> percepts;
    std::vector<ActionInstance> actions;
    std::vector<Message> sent;
    std::vector<Message> delivered;
    std::vector<std::string> notes;
};

struct Trace {
    std::vector<TickRecord> records;  // records[0] is the initial state
};

/// Tick-by-tick executor over a validated model. One step: drift, deliver
/// due messages, perceive and tick every agent in declaration order, apply
/// the joint actions, then run the agent-side effects those actions asked for.
class Simulation {
public:
    Simulation(const ModelSpec& model, const EpisodeConfig& config);

    const TickRecord& step(std::span<const Stimulus> injected = {});
    std::uint64_t tick() const { return state_.tick; }
    const EnvState& state() const { return state_; }
    const Trace& trace() const { return trace_; }
    Society& society() { return society_; }
    const Society& society() const { return society_; }

private:
    void apply_effects(const std::vector<AgentEffect>& effects, TickRecord& record);

    const ModelSpec& model_;
    EpisodeConfig config_;
    Society society_;
    EnvState state_;
    Trace trace_;
};

/// ticks = 0 yields the initial record only. Stimuli come from the config.
Trace run_episode(const ModelSpec& model, const EpisodeConfig& config);

/// One canonical key-sorted JSON line per record.
std::string serialize_record(const TickRecord& record);
std::string serialize(const Trace& trace);
/// Human-oriented rendering of the same information.
std::string render_text(const Trace& trace);

struct StimulusScript {
    std::vector<Stimulus> stimuli;  // sorted by tick, stable
    ValidationReport report;
};

/// Lines `<tick> <agent> <percept> [value...]`; `#` starts a comment. The
/// agent must declare the percept, ticks start at 1, and the value is read
/// against the percept's kind (the remaining words joined for symbols).
StimulusScript parse_stimulus_script(std::string_view text, const ModelSpec& model, const std::string& file = "");

}  // namespace masforge
