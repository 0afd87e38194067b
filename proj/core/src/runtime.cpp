#include "masforge/runtime.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <json.hpp>

namespace masforge {

namespace {

using nlohmann::json;

json to_json(const Value& v) {
    if (v.is_int()) return v.as_int();
    if (v.is_real()) return v.as_real();
    return v.as_symbol();
}

json to_json(const Message& m) {
    json j;
    j["from"] = m.sender;
    j["to"] = m.receiver;
    j["performative"] = std::string(to_string(m.performative));
    j["sent_tick"] = m.sent_tick;
    switch (m.performative) {
    case Performative::Inform:
        j["key"] = m.key;
        j["value"] = to_json(m.value);
        break;
    case Performative::GetInformation:
        j["key"] = m.key;
        j["conversation"] = m.conversation_id;
        break;
    case Performative::Reply:
        j["key"] = m.key;
        j["conversation"] = m.conversation_id;
        j["known"] = m.known;
        if (m.known) j["value"] = to_json(m.value);
        break;
    case Performative::InformAboutConstraints:
        j["constraints"] = m.constraints;
        break;
    case Performative::AcceptPartnership:
        break;
    }
    return j;
}

std::string with_code(const std::string& code, const std::string& what) {
    return code + ": " + what;
}

std::string describe(const Message& m) {
    std::string s = m.sender + " -> " + m.receiver + " " + std::string(to_string(m.performative));
    switch (m.performative) {
    case Performative::Inform: s += " " + m.key + "=" + m.value.literal(); break;
    case Performative::GetInformation: s += " " + m.key + " #" + std::to_string(m.conversation_id); break;
    case Performative::Reply:
        s += " " + m.key + (m.known ? "=" + m.value.literal() : " unknown") + " #" + std::to_string(m.conversation_id);
        break;
    case Performative::InformAboutConstraints:
        for (const auto& c : m.constraints) s += " " + c;
        break;
    case Performative::AcceptPartnership: break;
    }
    return s;
}

}  // namespace

Simulation::Simulation(const ModelSpec& model, const EpisodeConfig& config)
    : model_(model), config_(config), society_(model), state_(initial_state(model.environment, config.seed)) {
    std::stable_sort(config_.stimuli.begin(), config_.stimuli.end(),
                     [](const Stimulus& a, const Stimulus& b) { return a.tick < b.tick; });
    TickRecord first;
    first.tick = 0;
    first.state = state_;
    trace_.records.push_back(std::move(first));
}

const TickRecord& Simulation::step(std::span<const Stimulus> injected) {
    const std::uint64_t now = state_.tick + 1;
    TickRecord record;
    record.tick = now;
    society_.bus().set_tick(now);

    EnvState drifted = autonomous_step(state_, model_.environment, config_.step);
    record.delivered = society_.deliver(now);

    const std::size_t count = society_.agents().size();
    std::vector<ActionInstance> joint;
    for (auto& agent : society_.agents()) {
        std::vector<Percept> percepts = perceive_env(drifted, model_.environment, *agent.spec, count, now);
        auto add = [&](const Stimulus& s) {
            if (s.tick == now && s.agent == agent.id()) {
                percepts.push_back({std::string(kUserSource), s.name, s.value, now});
            }
        };
        for (const auto& s : config_.stimuli) add(s);
        for (const auto& s : injected) add(s);
        for (const auto& p : percepts) record.percepts.push_back({agent.id(), p});

        try {
            auto out = tick_agent(agent, percepts, society_.bus(), now, config_.cognition);
            for (auto& a : out.actions) joint.push_back(std::move(a));
            for (auto& m : out.messages) record.sent.push_back(std::move(m));
            for (auto& n : out.notes) record.notes.push_back(std::move(n));
        } catch (const ModelError& e) {
            record.notes.push_back(agent.id() + ": " + with_code(e.code(), e.what()));
        } catch (const EvalError& e) {
            record.notes.push_back(agent.id() + ": " + with_code(e.code(), e.what()));
        } catch (const InteractionError& e) {
            record.notes.push_back(agent.id() + ": " + with_code(e.code(), e.what()));
        }
    }

    order_joint_actions(joint);
    AttributeReader reader = [this](const std::string& actor, const std::string& attr) -> std::optional<Value> {
        const AgentInstance* a = society_.find(actor);
        if (a == nullptr) return std::nullopt;
        auto it = a->attributes.find(attr);
        if (it == a->attributes.end()) return std::nullopt;
        return it->second;
    };
    auto transition = modif_state(drifted, model_.environment, model_.actions, joint, config_.step, reader);
    state_ = transition.state;
    record.actions = std::move(joint);
    apply_effects(transition.deferred, record);
    record.state = state_;

    trace_.records.push_back(std::move(record));
    return trace_.records.back();
}

void Simulation::apply_effects(const std::vector<AgentEffect>& effects, TickRecord& record) {
    MessageBus& bus = society_.bus();
    for (const auto& e : effects) {
        try {
            switch (e.kind) {
            case EffectKind::AssignSelf: {
                AgentInstance* actor = society_.find(e.actor);
                const AttributeDecl* decl = actor ? actor->spec->find_attribute(e.target) : nullptr;
                if (decl == nullptr) {
                    record.notes.push_back(e.actor + ": " + with_code("E-UNRESOLVED-ATTR", "no attribute " + e.target));
                } else if (!assignable(decl->kind, e.value)) {
                    record.notes.push_back(e.actor + ": " + with_code("E-KIND", "attribute " + e.target + " is " +
                                                                                     std::string(to_string(decl->kind))));
                } else {
                    actor->attributes[e.target] = coerce(decl->kind, e.value);
                }
                break;
            }
            case EffectKind::Inform:
                record.sent.push_back(bus.inform(e.actor, e.target, e.key, e.value));
                break;
            case EffectKind::Ask:
                record.sent.push_back(bus.query(e.actor, e.target, e.key));
                break;
            case EffectKind::Constrain:
                record.sent.push_back(
                    bus.inform_about_constraints(e.actor, e.target, {e.constraints.begin(), e.constraints.end()}));
                break;
            case EffectKind::Partner:
                record.sent.push_back(bus.accept_partnership(e.actor, e.target));
                break;
            case EffectKind::Assign:
                break;
            }
        } catch (const InteractionError& err) {
            record.notes.push_back(e.actor + ": " + with_code(err.code(), err.what()));
        }
    }
}

Trace run_episode(const ModelSpec& model, const EpisodeConfig& config) {
    Simulation sim(model, config);
    for (std::uint64_t i = 0; i < config.ticks; ++i) sim.step();
    return sim.trace();
}

std::string serialize_record(const TickRecord& record) {
    json j;
    j["tick"] = record.tick;
    json state = json::object();
    for (const auto& [k, v] : record.state.values) state[k] = to_json(v);
    j["state"] = state;
    json percepts = json::array();
    for (const auto& p : record.percepts) {
        percepts.push_back({{"agent", p.agent},
                            {"name", p.percept.name},
                            {"source", p.percept.source},
                            {"value", to_json(p.percept.value)}});
    }
    j["percepts"] = percepts;
    json actions = json::array();
    for (const auto& a : record.actions) {
        json args = json::array();
        for (const auto& v : a.args) args.push_back(to_json(v));
        actions.push_back({{"action", a.action}, {"actor", a.actor}, {"args", args}});
    }
    j["actions"] = actions;
    json sent = json::array();
    for (const auto& m : record.sent) sent.push_back(to_json(m));
    j["sent"] = sent;
    json delivered = json::array();
    for (const auto& m : record.delivered) delivered.push_back(to_json(m));
    j["delivered"] = delivered;
    j["notes"] = record.notes;
    return j.dump();
}

std::string serialize(const Trace& trace) {
    std::string out;
    for (const auto& r : trace.records) {
        out += serialize_record(r);
        out += '\n';
    }
    return out;
}

std::string render_text(const Trace& trace) {
    std::ostringstream os;
    for (const auto& r : trace.records) {
        os << "tick " << r.tick;
        for (const auto& [k, v] : r.state.values) os << "  " << k << "=" << v.literal();
        os << '\n';
        for (const auto& p : r.percepts) {
            if (p.percept.name == kAgentCountPercept) continue;
            os << "  percept " << p.agent << " " << p.percept.name << "=" << p.percept.value.literal() << " from "
               << p.percept.source << '\n';
        }
        for (const auto& a : r.actions) {
            os << "  action " << a.actor << " " << a.action << "(";
            for (std::size_t i = 0; i < a.args.size(); ++i) os << (i ? ", " : "") << a.args[i].literal();
            os << ")\n";
        }
        for (const auto& m : r.delivered) os << "  delivered " << describe(m) << '\n';
        for (const auto& m : r.sent) os << "  sent " << describe(m) << '\n';
        for (const auto& n : r.notes) os << "  note " << n << '\n';
    }
    return os.str();
}

namespace {

std::vector<std::pair<std::string, int>> split_words(std::string_view line) {
    std::vector<std::pair<std::string, int>> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) words.emplace_back(std::string(line.substr(start, i - start)), static_cast<int>(start) + 1);
    }
    return words;
}

std::optional<Value> read_value(ValueKind kind, const std::string& text) {
    if (kind == ValueKind::Symbol) return Value::symbol(text);
    if (kind == ValueKind::Int) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size()) return std::nullopt;
        return Value::integer(v);
    }
    double d = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec != std::errc{} || p != text.data() + text.size()) return std::nullopt;
    return Value::real(d);
}

}  // namespace

StimulusScript parse_stimulus_script(std::string_view text, const ModelSpec& model, const std::string& file) {
    (void)file;
    StimulusScript out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto words = split_words(line);
        if (words.empty()) {
            if (end == text.size()) break;
            continue;
        }
        SourceLoc loc{line_no, words[0].second};
        if (words.size() < 3) {
            out.report.error("E-SCRIPT", "expected '<tick> <agent> <percept> [value...]'", loc);
            continue;
        }
        std::uint64_t tick = 0;
        const auto& t = words[0].first;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), tick);
        if (ec != std::errc{} || p != t.data() + t.size() || tick == 0) {
            out.report.error("E-SCRIPT", "tick must be a positive integer, got '" + t + "'", loc);
            continue;
        }
        const AgentSpec* agent = model.find_agent(words[1].first);
        if (agent == nullptr) {
            out.report.error("E-UNKNOWN-AGENT", "no agent named '" + words[1].first + "'", {line_no, words[1].second});
            continue;
        }
        const PerceptDecl* percept = agent->find_perception(words[2].first);
        if (percept == nullptr) {
            out.report.error("E-UNRESOLVED-PERCEPT",
                             "agent '" + agent->name + "' declares no perception '" + words[2].first + "'",
                             {line_no, words[2].second});
            continue;
        }
        std::string rest;
        if (words.size() > 3) {
            std::size_t from = static_cast<std::size_t>(words[3].second - 1);
            std::size_t to = static_cast<std::size_t>(words.back().second - 1) + words.back().first.size();
            rest = std::string(line.substr(from, to - from));
        }
        std::optional<Value> value = rest.empty() && percept->kind != ValueKind::Symbol
                                         ? std::optional<Value>(coerce(percept->kind, Value::integer(0)))
                                         : read_value(percept->kind, rest);
        if (!value) {
            out.report.error("E-KIND",
                             "'" + rest + "' is not a " + std::string(to_string(percept->kind)) + " value",
                             {line_no, words[3].second});
            continue;
        }
        out.stimuli.push_back({tick, agent->name, percept->name, *value, loc});
    }
    std::stable_sort(out.stimuli.begin(), out.stimuli.end(),
                     [](const Stimulus& a, const Stimulus& b) { return a.tick < b.tick; });
    return out;
}

}  // namespace masforge
