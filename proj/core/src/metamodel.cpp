#include "masforge/metamodel.hpp"

#include <algorithm>
#include <set>

namespace masforge {

std::string_view to_string(AgentKind kind) {
    switch (kind) {
    case AgentKind::Agent: return "agent";
    case AgentKind::Reactive: return "reactive";
    case AgentKind::Cognitive: return "cognitive";
    case AgentKind::Communicative: return "communicative";
    case AgentKind::Adaptive: return "adaptive";
    case AgentKind::Intentional: return "intentional";
    case AgentKind::Rational: return "rational";
    }
    return "?";
}

std::optional<AgentKind> parse_agent_kind(std::string_view word) {
    for (auto k : {AgentKind::Agent, AgentKind::Reactive, AgentKind::Cognitive, AgentKind::Communicative,
                   AgentKind::Adaptive, AgentKind::Intentional, AgentKind::Rational}) {
        if (to_string(k) == word) return k;
    }
    return std::nullopt;
}

std::optional<AgentKind> parent(AgentKind kind) {
    switch (kind) {
    case AgentKind::Agent: return std::nullopt;
    case AgentKind::Adaptive:
    case AgentKind::Intentional:
    case AgentKind::Rational: return AgentKind::Cognitive;
    default: return AgentKind::Agent;
    }
}

std::vector<AgentKind> kind_family(AgentKind kind) {
    std::vector<AgentKind> chain{kind};
    while (auto p = parent(chain.back())) chain.push_back(*p);
    return chain;
}

bool cognitive_family(AgentKind kind) {
    return kind == AgentKind::Cognitive || kind == AgentKind::Adaptive || kind == AgentKind::Intentional ||
           kind == AgentKind::Rational;
}

bool is_bdi(AgentKind kind) {
    return kind == AgentKind::Intentional || kind == AgentKind::Rational;
}

std::string_view to_string(Section s) {
    switch (s) {
    case Section::Beliefs: return "beliefs";
    case Section::Intentions: return "intentions";
    case Section::DesireRules: return "desires";
    case Section::Representations: return "representations";
    case Section::Knowledge: return "knowledge";
    case Section::StimulusRules: return "rules";
    case Section::Goals: return "goals";
    case Section::Scores: return "scores";
    }
    return "?";
}

bool section_allowed(AgentKind kind, Section s) {
    switch (s) {
    case Section::Beliefs:
    case Section::Intentions:
    case Section::DesireRules: return is_bdi(kind);
    case Section::Representations: return cognitive_family(kind) || kind == AgentKind::Communicative;
    case Section::Knowledge:
        return kind == AgentKind::Adaptive || kind == AgentKind::Intentional || kind == AgentKind::Rational;
    case Section::StimulusRules: return kind == AgentKind::Reactive;
    case Section::Goals:
        return kind == AgentKind::Cognitive || kind == AgentKind::Communicative || kind == AgentKind::Adaptive;
    case Section::Scores: return kind == AgentKind::Rational;
    }
    return false;
}

std::string_view to_string(PerceptSource s) {
    return s == PerceptSource::Environment ? "environment" : "agent";
}

bool AgentSpec::has_section(Section s) const {
    switch (s) {
    case Section::Beliefs: return !beliefs.empty();
    case Section::Intentions: return !intentions.empty();
    case Section::DesireRules: return !desires.empty();
    case Section::Representations: return !representations.empty();
    case Section::Knowledge: return !knowledge.empty();
    case Section::StimulusRules: return !rules.empty();
    case Section::Goals: return !goals.empty();
    case Section::Scores: return !scores.empty();
    }
    return false;
}

const PerceptDecl* AgentSpec::find_perception(std::string_view n) const {
    auto it = std::find_if(perceptions.begin(), perceptions.end(), [&](const auto& p) { return p.name == n; });
    return it == perceptions.end() ? nullptr : &*it;
}

const AttributeDecl* AgentSpec::find_attribute(std::string_view n) const {
    auto it = std::find_if(attributes.begin(), attributes.end(), [&](const auto& a) { return a.name == n; });
    return it == attributes.end() ? nullptr : &*it;
}

const IntentionDecl* AgentSpec::find_intention(std::string_view goal) const {
    auto it = std::find_if(intentions.begin(), intentions.end(), [&](const auto& i) { return i.goal == goal; });
    return it == intentions.end() ? nullptr : &*it;
}

const StateVarDecl* EnvironmentSpec::find_state(std::string_view n) const {
    auto it = std::find_if(state_vars.begin(), state_vars.end(), [&](const auto& s) { return s.name == n; });
    return it == state_vars.end() ? nullptr : &*it;
}

bool EnvironmentSpec::exposes(std::string_view percept) const {
    if (percept == kAgentCountPercept) return true;
    return std::any_of(perceptions.begin(), perceptions.end(), [&](const auto& p) { return p.name == percept; });
}

std::vector<std::string> ActionSpec::write_set() const {
    std::set<std::string> vars;
    for (const auto& e : effects) {
        if (e.kind == EffectKind::Assign) vars.insert(e.target);
    }
    return {vars.begin(), vars.end()};
}

std::string_view to_string(Performative p) {
    switch (p) {
    case Performative::Inform: return "inform";
    case Performative::GetInformation: return "get_information";
    case Performative::InformAboutConstraints: return "inform_about_constraints";
    case Performative::AcceptPartnership: return "accept_partnership";
    case Performative::Reply: return "reply";
    }
    return "?";
}

std::optional<Performative> parse_performative(std::string_view word) {
    for (auto p : {Performative::Inform, Performative::GetInformation, Performative::InformAboutConstraints,
                   Performative::AcceptPartnership}) {
        if (to_string(p) == word) return p;
    }
    return std::nullopt;
}

bool InteractionSpec::permits(Performative p) const {
    return std::find(allowed.begin(), allowed.end(), p) != allowed.end();
}

const AgentSpec* ModelSpec::find_agent(std::string_view n) const {
    auto it = std::find_if(agents.begin(), agents.end(), [&](const auto& a) { return a.name == n; });
    return it == agents.end() ? nullptr : &*it;
}

const ActionSpec* ModelSpec::find_action(std::string_view n) const {
    auto it = std::find_if(actions.begin(), actions.end(), [&](const auto& a) { return a.name == n; });
    return it == actions.end() ? nullptr : &*it;
}

bool ModelSpec::permits(std::string_view a, std::string_view b, Performative p) const {
    return std::any_of(interactions.begin(), interactions.end(), [&](const InteractionSpec& i) {
        bool pair = (i.initiator == a && i.responder == b) || (i.initiator == b && i.responder == a);
        return pair && i.permits(p);
    });
}

// ---------------------------------------------------------------------------

std::string_view to_string(FlatClassRole r) {
    switch (r) {
    case FlatClassRole::Environment: return "environment";
    case FlatClassRole::Agent: return "agent";
    case FlatClassRole::Action: return "action";
    case FlatClassRole::Interaction: return "interaction";
    }
    return "?";
}

const FlatClass* FlatClassModel::find(std::string_view title) const {
    auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) { return c.title == title; });
    return it == classes.end() ? nullptr : &*it;
}

namespace {

std::vector<std::string> own_operations(AgentKind kind) {
    switch (kind) {
    case AgentKind::Agent: return {"run", "perceive", "act"};
    case AgentKind::Reactive: return {};
    case AgentKind::Cognitive: return {"decide"};
    case AgentKind::Communicative: return {"communicate"};
    case AgentKind::Adaptive: return {"change_information"};
    case AgentKind::Intentional:
        return {"revise_beliefs", "generate_desires", "filter", "actions_selection"};
    case AgentKind::Rational: return {"measure_performance"};
    }
    return {};
}

}  // namespace

std::vector<std::string> kind_operations(AgentKind kind) {
    auto chain = kind_family(kind);
    std::vector<std::string> ops;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        for (auto& op : own_operations(*it)) ops.push_back(std::move(op));
    }
    return ops;
}

std::string interaction_title(const InteractionSpec& interaction) {
    return interaction.initiator + "_" + interaction.responder + "_interaction";
}

FlatClassModel flatten(const ModelSpec& model) {
    auto report = validate_model(model);
    if (!report.passes()) {
        throw ModelError("E-UNVALIDATED", "model '" + model.name + "' does not validate", report);
    }

    FlatClassModel flat;
    flat.model_name = model.name;

    const auto& env = model.environment;
    FlatClass env_class{env.name, FlatClassRole::Environment, "environment", {}, {"run", "perceive", "modify_state"}};
    env_class.attributes.push_back({"flag", "deterministic", env.deterministic ? "true" : "false"});
    env_class.attributes.push_back({"flag", "static", env.static_flag ? "true" : "false"});
    env_class.attributes.push_back({"flag", "continuous", env.continuous ? "true" : "false"});
    for (const auto& s : env.state_vars) {
        env_class.attributes.push_back({"state", s.name, std::string(to_string(s.kind))});
    }
    env_class.attributes.push_back({"perception", std::string(kAgentCountPercept), "int"});
    for (const auto& p : env.perceptions) {
        if (p.name == kAgentCountPercept) continue;
        env_class.attributes.push_back({"perception", p.name, std::string(to_string(p.kind))});
    }
    flat.classes.push_back(std::move(env_class));

    for (const auto& agent : model.agents) {
        FlatClass c{agent.name, FlatClassRole::Agent, std::string(to_string(agent.kind)), {}, kind_operations(agent.kind)};
        for (const auto& r : agent.roles) c.attributes.push_back({"role", r.name, "role"});
        for (const auto& p : agent.perceptions) {
            c.attributes.push_back({"perception", p.name, std::string(to_string(p.kind))});
        }
        for (const auto& i : agent.intentions) c.attributes.push_back({"intention", i.goal, "plan"});
        for (const auto& b : agent.beliefs) {
            c.attributes.push_back({"belief", b.key, std::string(to_string(b.value.kind()))});
        }
        for (const auto& r : agent.representations) c.attributes.push_back({"representation", r.name, "fact"});
        for (const auto& a : agent.attributes) {
            c.attributes.push_back({"attribute", a.name, std::string(to_string(a.kind))});
        }
        flat.classes.push_back(std::move(c));
    }

    for (const auto& action : model.actions) {
        FlatClass c{action.name, FlatClassRole::Action, "action", {}, {"execute"}};
        c.attributes.push_back({"actor", action.actor, "agent"});
        for (const auto& p : action.params) c.attributes.push_back({"param", p.name, std::string(to_string(p.kind))});
        flat.classes.push_back(std::move(c));
    }

    for (const auto& interaction : model.interactions) {
        FlatClass c{interaction_title(interaction), FlatClassRole::Interaction, "interaction", {}, {}};
        c.attributes.push_back({"endpoint", interaction.initiator, "agent"});
        c.attributes.push_back({"endpoint", interaction.responder, "agent"});
        for (auto p : interaction.allowed) c.operations.emplace_back(to_string(p));
        flat.classes.push_back(std::move(c));
    }
    return flat;
}

}  // namespace masforge
