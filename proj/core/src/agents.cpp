#include "masforge/agents.hpp"

#include <algorithm>

namespace masforge {

namespace {

std::vector<std::string> agent_names(const ModelSpec& model) {
    std::vector<std::string> names;
    for (const auto& a : model.agents) names.push_back(a.name);
    return names;
}

std::optional<Value> answer_query(const AgentInstance& agent, const std::string& key) {
    if (agent.cognition) {
        if (auto r = agent.cognition->representations.find(key); r != agent.cognition->representations.end()) {
            return r->second.value;
        }
    }
    if (auto a = agent.attributes.find(key); a != agent.attributes.end()) return a->second;
    return std::nullopt;
}

}  // namespace

AgentInstance make_instance(const AgentSpec& spec) {
    AgentInstance agent;
    agent.spec = &spec;
    for (const auto& a : spec.attributes) agent.attributes[a.name] = coerce(a.kind, a.initial);
    if (spec.kind != AgentKind::Reactive) agent.cognition = initial_cognition(spec);
    return agent;
}

std::vector<ActionInstance> react(const AgentInstance& agent, std::span<const Percept> percepts, std::uint64_t tick) {
    std::vector<ActionInstance> out;
    for (const auto& rule : agent.spec->rules) {
        for (const auto& p : percepts) {
            if (p.name != rule.event) continue;
            ValueLookup scope = [&](std::string_view key) -> std::optional<Value> {
                if (!rule.bindings.empty() && rule.bindings.front() == key) return p.value;
                if (auto a = agent.attributes.find(std::string(key)); a != agent.attributes.end()) return a->second;
                return std::nullopt;
            };
            if (!holds(rule.guard, scope)) continue;
            ActionInstance action{rule.action.action, agent.id(), {}, tick};
            for (const auto& arg : rule.action.args) action.args.push_back(evaluate(arg, scope));
            out.push_back(std::move(action));
        }
    }
    return out;
}

AgentOutput tick_agent(AgentInstance& agent, std::span<const Percept> percepts, MessageBus& bus, std::uint64_t tick,
                       const CognitionConfig& config) {
    AgentOutput out;
    std::vector<Percept> all(percepts.begin(), percepts.end());

    while (!agent.mailbox.empty()) {
        Message m = std::move(agent.mailbox.front());
        agent.mailbox.pop_front();
        switch (m.performative) {
        case Performative::Inform:
            all.push_back({m.sender, m.key, m.value, tick});
            break;
        case Performative::Reply:
            if (m.known) {
                all.push_back({m.sender, m.key, m.value, tick});
            } else {
                out.notes.push_back(agent.id() + ": " + m.sender + " does not know " + m.key);
            }
            break;
        case Performative::GetInformation:
            out.messages.push_back(bus.reply(m, answer_query(agent, m.key)));
            break;
        case Performative::InformAboutConstraints:
            agent.constraints.insert(m.constraints.begin(), m.constraints.end());
            break;
        case Performative::AcceptPartnership:
            agent.partnerships.insert(m.sender);
            break;
        }
    }
    agent.percept_buffer = all;

    const AgentSpec& spec = *agent.spec;
    if (spec.kind == AgentKind::Reactive) {
        out.actions = react(agent, all, tick);
        return out;
    }

    CognitionState& state = *agent.cognition;
    absorb_representations(state, spec, all);

    if (spec.kind == AgentKind::Adaptive) {
        ChangeEvent event;
        for (const auto& p : all) {
            auto fact = state.knowledge.find(p.name);
            if (fact != state.knowledge.end() && !(fact->second == p.value)) event.knowledge[p.name] = p.value;
        }
        if (!event.empty()) {
            state = change_information(state, event);
            out.notes.push_back(agent.id() + ": " + describe(event));
        }
    }

    auto decided = decide(spec, state, agent.attributes, all, tick, config);
    state = std::move(decided.state);
    out.actions = std::move(decided.actions);
    for (auto& n : decided.notes) out.notes.push_back(std::move(n));

    if (spec.kind == AgentKind::Communicative) {
        for (auto& m : communicate(spec, state, bus)) out.messages.push_back(std::move(m));
    }
    return out;
}

Society::Society(const ModelSpec& model) : bus_(model.interactions, agent_names(model)) {
    agents_.reserve(model.agents.size());
    for (const auto& a : model.agents) agents_.push_back(make_instance(a));
}

AgentInstance* Society::find(std::string_view name) {
    auto it = std::find_if(agents_.begin(), agents_.end(), [&](const AgentInstance& a) { return a.id() == name; });
    return it == agents_.end() ? nullptr : &*it;
}

const AgentInstance* Society::find(std::string_view name) const {
    return const_cast<Society*>(this)->find(name);
}

std::vector<Message> Society::deliver(std::uint64_t tick) {
    auto due = bus_.collect_due(tick);
    for (const auto& m : due) {
        AgentInstance* receiver = find(m.receiver);
        if (receiver == nullptr) continue;
        switch (m.performative) {
        case Performative::AcceptPartnership:
            receiver->partnerships.insert(m.sender);
            if (AgentInstance* sender = find(m.sender)) sender->partnerships.insert(m.receiver);
            break;
        case Performative::InformAboutConstraints:
            receiver->constraints.insert(m.constraints.begin(), m.constraints.end());
            break;
        default:
            receiver->mailbox.push_back(m);
            break;
        }
    }
    return due;
}

bool Society::partnerships_symmetric() const {
    for (const auto& a : agents_) {
        for (const auto& p : a.partnerships) {
            const AgentInstance* b = find(p);
            if (b == nullptr || !b->partnerships.count(a.id())) return false;
        }
    }
    return true;
}

std::set<std::string> sphere_of_influence(const ModelSpec& model, std::string_view agent) {
    std::set<std::string> out;
    for (const auto& action : model.actions) {
        if (action.actor != agent) continue;
        for (auto& v : action.write_set()) out.insert(v);
    }
    return out;
}

DependencyGraph spheres_overlap(const ModelSpec& model) {
    DependencyGraph g;
    std::map<std::string, std::set<std::string>> spheres;
    for (const auto& a : model.agents) {
        g.nodes.push_back(a.name);
        spheres[a.name] = sphere_of_influence(model, a.name);
    }
    for (auto i = spheres.begin(); i != spheres.end(); ++i) {
        for (auto j = std::next(i); j != spheres.end(); ++j) {
            DependencyEdge e{i->first, j->first, {}};
            std::set_intersection(i->second.begin(), i->second.end(), j->second.begin(), j->second.end(),
                                  std::back_inserter(e.shared));
            if (!e.shared.empty()) g.edges.push_back(std::move(e));
        }
    }
    return g;
}

}  // namespace masforge
