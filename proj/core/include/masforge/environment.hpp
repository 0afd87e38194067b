#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "masforge/metamodel.hpp"

namespace masforge {

/// Snapshot of environment state. `rng_seed` is present exactly when the
/// environment is non-deterministic.
struct EnvState {
    std::map<std::string, Value> values;
    std::uint64_t tick = 0;
    std::optional<std::uint64_t> rng_seed;

    bool operator==(const EnvState&) const = default;
};

struct Percept {
    std::string source;  // environment name or agent name
    std::string name;
    Value value;
    std::uint64_t tick = 0;

    bool operator==(const Percept&) const = default;
};

struct ActionInstance {
    std::string action;
    std::string actor;
    std::vector<Value> args;
    std::uint64_t tick = 0;

    bool operator==(const ActionInstance&) const = default;
};

/// Intermediate states of one step: K snapshots for a continuous
/// environment (first = pre-state, last = post-state), one snapshot (the
/// post-state) for a discrete one.
struct Trajectory {
    std::vector<EnvState> substates;
};

struct StepConfig {
    std::size_t substeps = 4;  // K; must be >= 2 for continuous environments
    double dt = 1.0;
};

/// Typed failure of an environment step, naming the offending variable.
class EnvError : public std::runtime_error {
public:
    EnvError(std::string code, std::string variable, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), variable_(std::move(variable)) {}
    const std::string& code() const { return code_; }
    const std::string& variable() const { return variable_; }

private:
    std::string code_;
    std::string variable_;
};

EnvState initial_state(const EnvironmentSpec& spec, std::uint64_t seed = 0);

/// One percept per environment-sourced perception the observer declares,
/// then the implicit agent_count. `observed_tick` defaults to `state.tick`.
std::vector<Percept> perceive_env(const EnvState& state, const EnvironmentSpec& spec, const AgentSpec& observer,
                                  std::size_t agent_count, std::optional<std::uint64_t> observed_tick = std::nullopt);

/// Work an action asks of the runtime beyond the environment: attribute
/// writes on its actor and outgoing interaction messages.
struct AgentEffect {
    EffectKind kind = EffectKind::AssignSelf;
    std::string actor;
    std::string action;
    std::string target;  // attribute name, or receiving agent for messages
    std::string key;
    Value value;
    std::vector<std::string> constraints;

    bool operator==(const AgentEffect&) const = default;
};

struct StateTransition {
    EnvState state;
    Trajectory trajectory;
    std::vector<AgentEffect> deferred;
};

/// Reads `self.<attr>` for an actor during effect evaluation.
using AttributeReader = std::function<std::optional<Value>(const std::string& actor, const std::string& attr)>;

/// Stable sort into the joint-action order: (submission tick, actor name).
void order_joint_actions(std::vector<ActionInstance>& actions);

/// Applies `actions` (already in joint order) to `state`. Effects run in
/// sequence, each seeing the previous ones; the tick advances by one.
/// Non-deterministic choices draw from the stream keyed by (seed, new tick).
StateTransition modif_state(const EnvState& state, const EnvironmentSpec& spec, std::span<const ActionSpec> catalogue,
                            std::span<const ActionInstance> actions, const StepConfig& config = {},
                            const AttributeReader& attributes = {});

/// Drift between two perceptions. Identity on a static environment.
EnvState autonomous_step(const EnvState& state, const EnvironmentSpec& spec, const StepConfig& config = {});

/// As autonomous_step, also returning the K recorded substates.
StateTransition autonomous_step_traced(const EnvState& state, const EnvironmentSpec& spec,
                                       const StepConfig& config = {});

}  // namespace masforge
