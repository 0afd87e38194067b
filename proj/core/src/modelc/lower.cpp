#include <map>
#include <set>
#include <tuple>

#include "masforge/modelc/compile.hpp"

namespace masforge {

LowerResult lower(const Ast& ast) {
    LowerResult out;
    ModelSpec& m = out.model;
    m.name = ast.model_name;

    if (ast.environments.empty()) {
        out.report.error("E-NO-ENVIRONMENT", "model '" + ast.model_name + "' declares no environment", ast.model_loc);
    } else {
        m.environment = ast.environments.front();
        for (std::size_t i = 1; i < ast.environments.size(); ++i) {
            out.report.error("E-DUP-NAME",
                             "second environment '" + ast.environments[i].name + "'; a model has exactly one",
                             ast.environments[i].loc, ast.environments.front().loc);
        }
    }

    std::map<std::string, SourceLoc> top;
    auto claim = [&](const std::string& name, SourceLoc loc, const char* what) {
        auto [it, fresh] = top.emplace(name, loc);
        if (!fresh) {
            out.report.error("E-DUP-NAME", std::string("duplicate top-level name '") + name + "' (" + what + ")", loc,
                             it->second);
        }
    };
    if (!ast.environments.empty()) claim(m.environment.name, m.environment.loc, "environment");

    for (const auto& decl : ast.agents) {
        claim(decl.spec.name, decl.spec.loc, "agent");
        auto kind = parse_agent_kind(decl.kind_word);
        if (!kind) {
            out.report.error("E-UNKNOWN-KIND", "agent '" + decl.spec.name + "' has unknown kind '" + decl.kind_word + "'",
                             decl.kind_loc);
            continue;
        }
        AgentSpec spec = decl.spec;
        spec.kind = *kind;
        m.agents.push_back(std::move(spec));
    }
    for (const auto& a : ast.actions) {
        claim(a.name, a.loc, "action");
        m.actions.push_back(a);
    }

    std::set<std::string> agent_names;
    for (const auto& decl : ast.agents) agent_names.insert(decl.spec.name);
    for (const auto& i : ast.interactions) {
        for (const auto* end : {&i.initiator, &i.responder}) {
            if (!agent_names.count(*end)) {
                out.report.error("E-UNRESOLVED-AGENT", "interaction names undeclared agent '" + *end + "'", i.loc);
            }
        }
        m.interactions.push_back(i);
    }
    return out;
}

CompileResult compile(const SourceText& source) {
    CompileResult out;
    ParseResult parsed = parse(source);
    out.ast = std::move(parsed.ast);
    out.report = std::move(parsed.report);
    if (!out.report.passes()) return out;
    out.parsed = true;

    LowerResult lowered = lower(out.ast);
    out.model = std::move(lowered.model);
    out.report.append(lowered.report);

    std::set<std::tuple<std::string, int, int>> seen;
    for (const auto& d : out.report.diagnostics) seen.emplace(d.code, d.loc.line, d.loc.column);
    for (const auto& d : validate_model(out.model).diagnostics) {
        if (!seen.count({d.code, d.loc.line, d.loc.column})) out.report.diagnostics.push_back(d);
    }
    return out;
}

}  // namespace masforge
