#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "masforge/cognition.hpp"
#include "masforge/environment.hpp"
#include "masforge/message.hpp"
#include "masforge/metamodel.hpp"

namespace masforge {

/// A live agent. `cognition` is present for every kind except Reactive.
struct AgentInstance {
    const AgentSpec* spec = nullptr;
    std::deque<Message> mailbox;
    std::vector<Percept> percept_buffer;
    std::map<std::string, Value> attributes;
    std::set<std::string> partnerships;
    std::set<std::string> constraints;
    std::optional<CognitionState> cognition;

    const std::string& id() const { return spec->name; }
};

AgentInstance make_instance(const AgentSpec& spec);

/// Stimulus-action firing: rules in declaration order, then percepts in
/// arrival order. A rule's binding names the percept value.
std::vector<ActionInstance> react(const AgentInstance& agent, std::span<const Percept> percepts, std::uint64_t tick);

struct AgentOutput {
    std::vector<ActionInstance> actions;
    std::vector<Message> messages;
    std::vector<std::string> notes;
};

/// Drains the mailbox (Informs and known Replies become percepts, queries are
/// answered), then reacts or deliberates according to the agent's kind.
AgentOutput tick_agent(AgentInstance& agent, std::span<const Percept> percepts, MessageBus& bus, std::uint64_t tick,
                       const CognitionConfig& config = {});

/// All agents of a model plus the bus that links them.
class Society {
public:
    explicit Society(const ModelSpec& model);

    std::vector<AgentInstance>& agents() { return agents_; }
    const std::vector<AgentInstance>& agents() const { return agents_; }
    AgentInstance* find(std::string_view name);
    const AgentInstance* find(std::string_view name) const;
    MessageBus& bus() { return bus_; }
    const MessageBus& bus() const { return bus_; }

    /// Hands out the messages due at `tick`. Partnership acceptances and
    /// constraint sets take effect here; the rest land in mailboxes.
    std::vector<Message> deliver(std::uint64_t tick);

    bool partnerships_symmetric() const;

private:
    std::vector<AgentInstance> agents_;
    MessageBus bus_;
};

struct DependencyEdge {
    std::string a;  // a < b
    std::string b;
    std::vector<std::string> shared;

    bool operator==(const DependencyEdge&) const = default;
};

struct DependencyGraph {
    std::vector<std::string> nodes;
    std::vector<DependencyEdge> edges;  // sorted by (a, b)

    bool operator==(const DependencyGraph&) const = default;
};

/// State variables each agent's actions can write.
std::set<std::string> sphere_of_influence(const ModelSpec& model, std::string_view agent);

DependencyGraph spheres_overlap(const ModelSpec& model);

}  // namespace masforge
