#include <sstream>

#include "masforge/modelc/syntax.hpp"

namespace masforge {

namespace {

std::string call_text(const ActionCall& c) {
    std::string s = c.action + "(";
    for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) s += ", ";
        s += print(c.args[i]);
    }
    return s + ")";
}

std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ", ";
        s += items[i];
    }
    return s;
}

const char* flag(bool b) {
    return b ? "true" : "false";
}

void print_environment(std::ostream& os, const EnvironmentSpec& env) {
    os << "environment " << env.name << " {\n";
    os << "  deterministic: " << flag(env.deterministic) << "\n";
    os << "  static: " << flag(env.static_flag) << "\n";
    os << "  continuous: " << flag(env.continuous) << "\n";
    for (const auto& s : env.state_vars) {
        os << "  state " << s.name << ": " << to_string(s.kind) << " = " << s.initial.literal() << "\n";
    }
    for (const auto& p : env.perceptions) os << "  perception " << p.name << ": " << to_string(p.kind) << "\n";
    for (const auto& d : env.drift_rules) os << "  drift " << d.target << " := " << print(d.expr) << "\n";
    os << "}\n";
}

void print_facts(std::ostream& os, const char* title, const std::vector<FactDecl>& facts) {
    if (facts.empty()) return;
    os << "  " << title << " {\n";
    for (const auto& f : facts) os << "    " << f.key << " = " << f.value.literal() << "\n";
    os << "  }\n";
}

void print_agent(std::ostream& os, const AgentDecl& decl) {
    const AgentSpec& a = decl.spec;
    os << "agent " << a.name << ": " << decl.kind_word << " {\n";
    for (const auto& r : a.roles) os << "  role " << r.name << "\n";
    for (const auto& p : a.perceptions) {
        os << "  perception " << p.name << ": " << to_string(p.kind) << " from " << to_string(p.source) << "\n";
    }
    for (const auto& at : a.attributes) {
        os << "  attribute " << at.name << ": " << to_string(at.kind) << " = " << at.initial.literal() << "\n";
    }
    for (const auto& r : a.representations) os << "  representation " << r.name << "\n";
    print_facts(os, "knowledge", a.knowledge);
    print_facts(os, "beliefs", a.beliefs);
    for (const auto& d : a.desires) {
        os << "  desire " << d.goal << " priority " << d.priority << " when " << print(d.guard);
        if (!d.conflicts.empty()) os << " conflicts " << join(d.conflicts);
        os << "\n";
    }
    for (const auto& i : a.intentions) {
        std::vector<std::string> steps;
        for (const auto& c : i.plan) steps.push_back(call_text(c));
        os << "  intention " << i.goal << " plan [" << join(steps) << "]\n";
    }
    for (const auto& r : a.rules) {
        os << "  rule on " << r.event << "(" << join(r.bindings) << ")";
        if (!r.guard.terms.empty()) os << " when " << print(r.guard);
        os << " => " << call_text(r.action) << "\n";
    }
    for (const auto& g : a.goals) {
        os << "  goal " << g.goal << " priority " << g.priority << " when " << print(g.guard) << " => "
           << call_text(g.action) << "\n";
    }
    for (const auto& s : a.scores) {
        os << "  score " << s.action << " when " << print(s.guard) << " = " << format_real(s.score) << "\n";
    }
    os << "}\n";
}

void print_action(std::ostream& os, const ActionSpec& act) {
    std::vector<std::string> params;
    for (const auto& p : act.params) params.push_back(p.name + ": " + std::string(to_string(p.kind)));
    os << "action " << act.name << " by " << act.actor << " (" << join(params) << ") {\n";
    for (const auto& e : act.effects) {
        os << "  ";
        switch (e.kind) {
        case EffectKind::Assign: os << e.target << " := " << print(e.value); break;
        case EffectKind::AssignSelf: os << "self." << e.target << " := " << print(e.value); break;
        case EffectKind::Inform: os << "inform " << e.target << " " << e.key << " = " << print(e.value); break;
        case EffectKind::Ask: os << "ask " << e.target << " " << e.key; break;
        case EffectKind::Constrain: os << "constrain " << e.target << " " << join(e.constraints); break;
        case EffectKind::Partner: os << "partner " << e.target; break;
        }
        os << "\n";
    }
    os << "}\n";
}

void print_interaction(std::ostream& os, const InteractionSpec& i) {
    std::vector<std::string> words;
    for (auto p : i.allowed) words.emplace_back(to_string(p));
    os << "interaction " << i.initiator << " <-> " << i.responder;
    if (i.reflexive) os << " reflexive";
    os << " allows " << join(words) << "\n";
}

}  // namespace

std::string print(const Ast& ast) {
    std::ostringstream os;
    os << "model " << ast.model_name << "\n";
    for (const auto& env : ast.environments) {
        os << "\n";
        print_environment(os, env);
    }
    for (const auto& a : ast.agents) {
        os << "\n";
        print_agent(os, a);
    }
    for (const auto& a : ast.actions) {
        os << "\n";
        print_action(os, a);
    }
    if (!ast.interactions.empty()) os << "\n";
    for (const auto& i : ast.interactions) print_interaction(os, i);
    return os.str();
}

}  // namespace masforge
