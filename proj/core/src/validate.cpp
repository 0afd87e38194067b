#include <algorithm>
#include <map>
#include <set>

#include "masforge/metamodel.hpp"

namespace masforge {

namespace {

// Reports every repeated name in `items` against its first occurrence.
template <typename Items, typename NameOf>
void check_unique(ValidationReport& report, const Items& items, NameOf name_of, const std::string& what) {
    std::map<std::string, SourceLoc> seen;
    for (const auto& item : items) {
        const std::string& n = name_of(item);
        auto [it, fresh] = seen.emplace(n, item.loc);
        if (!fresh) {
            report.error("E-DUP-NAME", "duplicate " + what + " '" + n + "'", item.loc, it->second);
        }
    }
}

std::string kind_word(ValueKind k) {
    return std::string(to_string(k));
}

class Validator {
public:
    explicit Validator(const ModelSpec& model) : model_(model) {}

    ValidationReport run() {
        check_top_level_names();
        check_environment();
        for (const auto& agent : model_.agents) check_agent(agent);
        for (const auto& action : model_.actions) check_action(action);
        check_interactions();
        check_unused_percepts();
        return std::move(report_);
    }

private:
    void check_top_level_names() {
        std::map<std::string, SourceLoc> seen;
        auto note = [&](const std::string& name, SourceLoc loc, const char* what) {
            auto [it, fresh] = seen.emplace(name, loc);
            if (!fresh) {
                report_.error("E-DUP-NAME", std::string("duplicate top-level name '") + name + "' (" + what + ")", loc,
                              it->second);
            }
        };
        note(model_.environment.name, model_.environment.loc, "environment");
        for (const auto& a : model_.agents) note(a.name, a.loc, "agent");
        for (const auto& a : model_.actions) note(a.name, a.loc, "action");
    }

    void check_environment() {
        const auto& env = model_.environment;
        check_unique(report_, env.state_vars, [](const auto& s) -> const std::string& { return s.name; },
                     "state variable");
        check_unique(report_, env.perceptions, [](const auto& p) -> const std::string& { return p.name; },
                     "environment perception");

        bool has_real = false;
        for (const auto& s : env.state_vars) {
            if (!assignable(s.kind, s.initial)) {
                report_.error("E-TYPE",
                              "state '" + s.name + "' is " + kind_word(s.kind) + " but its initial value is " +
                                  kind_word(s.initial.kind()),
                              s.loc);
            }
            if (s.kind == ValueKind::Real) {
                has_real = true;
                if (!env.continuous) {
                    report_.error("E-CONTINUITY", "discrete environment declares real state '" + s.name + "'", s.loc);
                }
            }
        }
        if (env.continuous && !has_real) {
            report_.error("E-CONTINUITY", "continuous environment '" + env.name + "' has no real state variable",
                          env.loc);
        }

        for (const auto& p : env.perceptions) {
            if (p.name == kAgentCountPercept) {
                if (p.kind != ValueKind::Int) {
                    report_.error("E-TYPE", "perception agent_count is always int", p.loc);
                }
                continue;
            }
            const auto* s = env.find_state(p.name);
            if (s == nullptr) {
                report_.error("E-UNRESOLVED-PERCEPT",
                              "environment perception '" + p.name + "' names no state variable", p.loc);
            } else if (s->kind != p.kind) {
                report_.error("E-TYPE", "perception '" + p.name + "' is " + kind_word(p.kind) + " but state is " +
                                            kind_word(s->kind),
                              p.loc);
            }
        }

        if (env.static_flag && !env.drift_rules.empty()) {
            report_.error("E-STATIC-DRIFT", "static environment '" + env.name + "' declares drift rules",
                          env.drift_rules.front().loc);
        }
        auto state_kind = [&](std::string_view n) -> std::optional<ValueKind> {
            if (const auto* s = env.find_state(n)) return s->kind;
            return std::nullopt;
        };
        for (const auto& d : env.drift_rules) {
            const auto* target = env.find_state(d.target);
            if (target == nullptr) {
                report_.error("E-UNRESOLVED-VAR", "drift targets undeclared state '" + d.target + "'", d.loc);
            }
            check_expr(d.expr, state_kind, d.loc, target ? std::optional(target->kind) : std::nullopt,
                       "drift of '" + d.target + "'");
        }
    }

    // Resolves names, infers the kind and checks it fits `expected`.
    void check_expr(const Expr& expr, const KindLookup& lookup, SourceLoc loc, std::optional<ValueKind> expected,
                    const std::string& what) {
        bool resolved = true;
        for (const auto& n : referenced_names(expr)) {
            if (!lookup(n)) {
                report_.error("E-UNRESOLVED-VAR", what + " references undeclared name '" + n + "'", loc);
                resolved = false;
            }
        }
        if (contains_choice(expr) && model_.environment.deterministic) {
            report_.error("E-NONDET", what + " uses one_of in a deterministic environment", loc);
        }
        if (!resolved) return;
        auto k = infer_kind(expr, lookup);
        if (!k.kind) {
            report_.error("E-TYPE", what + ": " + k.error, loc);
            return;
        }
        if (expected && !assignable(*expected, *k.kind)) {
            report_.error("E-TYPE", what + " yields " + kind_word(*k.kind) + " but needs " + kind_word(*expected),
                          loc);
        }
    }

    void check_call(const AgentSpec& agent, const ActionCall& call, const KindLookup& lookup, const std::string& what) {
        const auto* action = model_.find_action(call.action);
        if (action == nullptr) {
            report_.error("E-UNRESOLVED-ACTION", what + " calls undeclared action '" + call.action + "'", call.loc);
            return;
        }
        if (action->actor != agent.name) {
            report_.error("E-UNRESOLVED-ACTION",
                          what + " calls '" + call.action + "' which belongs to '" + action->actor + "'", call.loc);
            return;
        }
        if (call.args.size() != action->params.size()) {
            report_.error("E-ARITY",
                          what + " passes " + std::to_string(call.args.size()) + " argument(s) to '" + call.action +
                              "' which takes " + std::to_string(action->params.size()),
                          call.loc);
            return;
        }
        for (std::size_t i = 0; i < call.args.size(); ++i) {
            check_expr(call.args[i], lookup, call.loc, action->params[i].kind,
                       what + " argument '" + action->params[i].name + "'");
        }
    }

    void check_agent(const AgentSpec& agent) {
        const std::string who = "agent '" + agent.name + "'";
        if (agent.kind == AgentKind::Agent) {
            report_.error("E-ABSTRACT-KIND", who + " names the abstract agent root; pick a concrete kind", agent.loc);
        }
        for (auto s : {Section::Beliefs, Section::Intentions, Section::DesireRules, Section::Representations,
                       Section::Knowledge, Section::StimulusRules, Section::Goals, Section::Scores}) {
            if (agent.has_section(s) && !section_allowed(agent.kind, s)) {
                report_.error("E-KIND-SECTION",
                              who + " of kind " + std::string(to_string(agent.kind)) + " may not declare " +
                                  std::string(to_string(s)),
                              agent.loc);
            }
        }

        auto by_name = [](const auto& x) -> const std::string& { return x.name; };
        auto by_key = [](const auto& x) -> const std::string& { return x.key; };
        auto by_goal = [](const auto& x) -> const std::string& { return x.goal; };
        check_unique(report_, agent.roles, by_name, "role in " + who);
        check_unique(report_, agent.perceptions, by_name, "perception in " + who);
        check_unique(report_, agent.attributes, by_name, "attribute in " + who);
        check_unique(report_, agent.representations, by_name, "representation in " + who);
        check_unique(report_, agent.knowledge, by_key, "knowledge fact in " + who);
        check_unique(report_, agent.beliefs, by_key, "belief in " + who);
        check_unique(report_, agent.desires, by_goal, "desire in " + who);
        check_unique(report_, agent.intentions, by_goal, "intention in " + who);
        check_unique(report_, agent.goals, by_goal, "goal in " + who);

        for (const auto& p : agent.perceptions) {
            if (p.source != PerceptSource::Environment) continue;
            if (!model_.environment.exposes(p.name)) {
                report_.error("E-UNRESOLVED-PERCEPT",
                              who + " perceives '" + p.name + "' which the environment does not expose", p.loc);
            }
        }
        for (const auto& a : agent.attributes) {
            if (!assignable(a.kind, a.initial)) {
                report_.error("E-TYPE", "attribute '" + a.name + "' is " + kind_word(a.kind) +
                                            " but its default is " + kind_word(a.initial.kind()),
                              a.loc);
            }
        }

        auto attr_kind = [&](std::string_view n) -> std::optional<ValueKind> {
            if (const auto* a = agent.find_attribute(n)) return a->kind;
            return std::nullopt;
        };

        // Stimulus rules: the event is a declared perception; guards and
        // arguments see the binding and the attribute store.
        for (const auto& rule : agent.rules) {
            const auto* event = agent.find_perception(rule.event);
            if (event == nullptr) {
                report_.error("E-UNRESOLVED-PERCEPT", who + " has a rule on undeclared perception '" + rule.event + "'",
                              rule.loc);
            }
            if (rule.bindings.size() > 1) {
                report_.error("E-ARITY", "rule on '" + rule.event + "' binds more than one value", rule.loc);
            }
            std::optional<ValueKind> bound_kind = event ? std::optional(event->kind) : std::nullopt;
            auto lookup = [&](std::string_view n) -> std::optional<ValueKind> {
                if (!rule.bindings.empty() && rule.bindings.front() == n) {
                    return bound_kind ? bound_kind : std::optional(ValueKind::Symbol);
                }
                return attr_kind(n);
            };
            for (const auto& term : rule.guard.terms) {
                if (!lookup(term.key)) {
                    report_.error("E-UNRESOLVED-ATTR",
                                  "rule guard tests '" + term.key + "' which is neither an attribute nor a binding",
                                  term.loc);
                }
            }
            check_call(agent, rule.action, lookup, "rule on '" + rule.event + "'");
        }

        // Goals (non-BDI cognitive kinds) read representations, knowledge,
        // perceptions and attributes.
        for (const auto& goal : agent.goals) {
            for (const auto& term : goal.guard.terms) {
                bool known = agent.find_attribute(term.key) || agent.find_perception(term.key) ||
                             std::any_of(agent.representations.begin(), agent.representations.end(),
                                         [&](const auto& r) { return r.name == term.key; }) ||
                             std::any_of(agent.knowledge.begin(), agent.knowledge.end(),
                                         [&](const auto& f) { return f.key == term.key; });
                if (!known) {
                    report_.error("E-UNRESOLVED-ATTR", "goal '" + goal.goal + "' tests unknown key '" + term.key + "'",
                                  term.loc);
                }
            }
            if (goal.priority < 0) {
                report_.error("E-PRIORITY", "goal '" + goal.goal + "' has a negative priority", goal.loc);
            }
            check_call(agent, goal.action, attr_kind, "goal '" + goal.goal + "'");
        }

        // BDI sections.
        auto belief_key = [&](const std::string& key) {
            return std::any_of(agent.beliefs.begin(), agent.beliefs.end(), [&](const auto& b) { return b.key == key; }) ||
                   agent.find_perception(key) != nullptr;
        };
        std::set<std::string> goal_ids;
        for (const auto& d : agent.desires) goal_ids.insert(d.goal);
        for (const auto& d : agent.desires) {
            if (d.priority < 0) {
                report_.error("E-PRIORITY", "desire '" + d.goal + "' has a negative priority", d.loc);
            }
            for (const auto& term : d.guard.terms) {
                if (!belief_key(term.key)) {
                    report_.error("E-UNRESOLVED-BELIEF",
                                  "desire '" + d.goal + "' tests '" + term.key + "' which is not a belief key",
                                  term.loc);
                }
            }
            for (const auto& c : d.conflicts) {
                if (c == d.goal) {
                    report_.error("E-SELF-CONFLICT", "desire '" + d.goal + "' conflicts with itself", d.loc);
                } else if (!goal_ids.count(c)) {
                    report_.error("E-UNRESOLVED-GOAL", "desire '" + d.goal + "' conflicts with unknown goal '" + c + "'",
                                  d.loc);
                }
            }
            if (agent.find_intention(d.goal) == nullptr) {
                report_.warning("W-NO-PLAN", "desire '" + d.goal + "' has no intention plan", d.loc);
            }
        }
        for (const auto& intention : agent.intentions) {
            for (const auto& step : intention.plan) {
                check_call(agent, step, attr_kind, "plan of '" + intention.goal + "'");
            }
        }
        for (const auto& s : agent.scores) {
            if (!(s.score >= 0.0 && s.score <= 1.0)) {
                report_.error("E-SCORE-RANGE", "score for '" + s.action + "' lies outside [0,1]", s.loc);
            }
            const auto* action = model_.find_action(s.action);
            if (action == nullptr || action->actor != agent.name) {
                report_.error("E-UNRESOLVED-ACTION", "score names '" + s.action + "' which " + who + " cannot perform",
                              s.loc);
            }
            for (const auto& term : s.guard.terms) {
                if (!belief_key(term.key)) {
                    report_.error("E-UNRESOLVED-BELIEF", "score condition tests '" + term.key + "'", term.loc);
                }
            }
        }
    }

    void check_action(const ActionSpec& action) {
        const std::string what = "action '" + action.name + "'";
        const auto* actor = model_.find_agent(action.actor);
        if (actor == nullptr) {
            report_.error("E-UNRESOLVED-AGENT", what + " is performed by undeclared agent '" + action.actor + "'",
                          action.loc);
        }
        check_unique(report_, action.params, [](const auto& p) -> const std::string& { return p.name; },
                     "parameter in " + what);

        const auto& env = model_.environment;
        auto lookup = [&](std::string_view n) -> std::optional<ValueKind> {
            for (const auto& p : action.params) {
                if (p.name == n) return p.kind;
            }
            if (n.substr(0, 5) == "self.") {
                if (actor == nullptr) return std::nullopt;
                if (const auto* a = actor->find_attribute(n.substr(5))) return a->kind;
                return std::nullopt;
            }
            if (const auto* s = env.find_state(n)) return s->kind;
            return std::nullopt;
        };

        auto resolve_target = [&](const Effect& e, Performative p) {
            for (const auto& param : action.params) {
                if (param.name == e.target) {
                    if (param.kind != ValueKind::Symbol) {
                        report_.error("E-TYPE", what + " addresses a message through non-symbol parameter '" +
                                                    e.target + "'",
                                      e.loc);
                    }
                    return;
                }
            }
            if (model_.find_agent(e.target) == nullptr) {
                report_.error("E-UNRESOLVED-AGENT", what + " addresses unknown agent '" + e.target + "'", e.loc);
                return;
            }
            if (!model_.permits(action.actor, e.target, p)) {
                report_.error("E-NO-INTERACTION",
                              what + " sends " + std::string(to_string(p)) + " to '" + e.target +
                                  "' but no interaction permits it",
                              e.loc);
            }
        };

        for (const auto& e : action.effects) {
            switch (e.kind) {
            case EffectKind::Assign: {
                const auto* target = env.find_state(e.target);
                if (target == nullptr) {
                    report_.error("E-UNRESOLVED-VAR", what + " writes undeclared state '" + e.target + "'", e.loc);
                }
                check_expr(e.value, lookup, e.loc, target ? std::optional(target->kind) : std::nullopt,
                           what + " effect on '" + e.target + "'");
                break;
            }
            case EffectKind::AssignSelf: {
                const AttributeDecl* attr = actor ? actor->find_attribute(e.target) : nullptr;
                if (attr == nullptr) {
                    report_.error("E-UNRESOLVED-ATTR",
                                  what + " writes undeclared attribute 'self." + e.target + "'", e.loc);
                }
                check_expr(e.value, lookup, e.loc, attr ? std::optional(attr->kind) : std::nullopt,
                           what + " effect on 'self." + e.target + "'");
                break;
            }
            case EffectKind::Inform:
                resolve_target(e, Performative::Inform);
                check_expr(e.value, lookup, e.loc, std::nullopt, what + " inform payload");
                break;
            case EffectKind::Ask:
                resolve_target(e, Performative::GetInformation);
                break;
            case EffectKind::Constrain:
                resolve_target(e, Performative::InformAboutConstraints);
                break;
            case EffectKind::Partner:
                resolve_target(e, Performative::AcceptPartnership);
                break;
            }
        }
    }

    void check_interactions() {
        std::map<std::pair<std::string, std::string>, SourceLoc> pairs;
        for (const auto& i : model_.interactions) {
            bool ok = true;
            for (const auto* end : {&i.initiator, &i.responder}) {
                if (model_.find_agent(*end) == nullptr) {
                    report_.error("E-UNRESOLVED-AGENT", "interaction names undeclared agent '" + *end + "'", i.loc);
                    ok = false;
                }
            }
            if (i.initiator == i.responder && !i.reflexive) {
                report_.error("E-REFLEXIVE",
                              "interaction of '" + i.initiator + "' with itself must be marked reflexive", i.loc);
            }
            if (i.allowed.empty()) {
                report_.error("E-NO-PERFORMATIVE", "interaction allows no performative", i.loc);
            }
            if (ok) {
                auto key = std::minmax(i.initiator, i.responder);
                auto [it, fresh] = pairs.emplace(std::pair(key.first, key.second), i.loc);
                if (!fresh) {
                    report_.error("E-DUP-NAME",
                                  "duplicate interaction between '" + i.initiator + "' and '" + i.responder + "'",
                                  i.loc, it->second);
                }
            }
        }
    }

    void check_unused_percepts() {
        for (const auto& p : model_.environment.perceptions) {
            bool used = std::any_of(model_.agents.begin(), model_.agents.end(), [&](const AgentSpec& a) {
                const auto* decl = a.find_perception(p.name);
                return decl && decl->source == PerceptSource::Environment;
            });
            if (!used) {
                report_.warning("W-UNUSED-PERCEPT", "no agent perceives '" + p.name + "'", p.loc);
            }
        }
    }

    const ModelSpec& model_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate_model(const ModelSpec& model) {
    return Validator(model).run();
}

}  // namespace masforge
