#include "masforge/environment.hpp"

#include <algorithm>

namespace masforge {

EnvState initial_state(const EnvironmentSpec& spec, std::uint64_t seed) {
    EnvState state;
    for (const auto& s : spec.state_vars) state.values[s.name] = coerce(s.kind, s.initial);
    if (!spec.deterministic) state.rng_seed = seed;
    return state;
}

std::vector<Percept> perceive_env(const EnvState& state, const EnvironmentSpec& spec, const AgentSpec& observer,
                                  std::size_t agent_count, std::optional<std::uint64_t> observed_tick) {
    const std::uint64_t tick = observed_tick.value_or(state.tick);
    std::vector<Percept> out;
    for (const auto& p : observer.perceptions) {
        if (p.source != PerceptSource::Environment || p.name == kAgentCountPercept) continue;
        auto it = state.values.find(p.name);
        if (!spec.exposes(p.name) || it == state.values.end()) {
            throw EnvError("E-INTERNAL", p.name,
                           "agent '" + observer.name + "' perceives unexposed name '" + p.name + "'");
        }
        out.push_back({spec.name, p.name, it->second, tick});
    }
    out.push_back({spec.name, std::string(kAgentCountPercept), Value::integer(static_cast<std::int64_t>(agent_count)),
                   tick});
    return out;
}

void order_joint_actions(std::vector<ActionInstance>& actions) {
    std::stable_sort(actions.begin(), actions.end(), [](const ActionInstance& a, const ActionInstance& b) {
        if (a.tick != b.tick) return a.tick < b.tick;
        return a.actor < b.actor;
    });
}

namespace {

ValueLookup state_lookup(const EnvState& state) {
    return [&state](std::string_view n) -> std::optional<Value> {
        auto it = state.values.find(std::string(n));
        if (it == state.values.end()) return std::nullopt;
        return it->second;
    };
}

void store(EnvState& state, const EnvironmentSpec& spec, const std::string& var, const Value& v) {
    const auto* decl = spec.find_state(var);
    if (decl == nullptr) throw EnvError("E-UNRESOLVED-VAR", var, "write to undeclared state '" + var + "'");
    if (!assignable(decl->kind, v)) {
        throw EnvError("E-KIND", var,
                       "state '" + var + "' is " + std::string(to_string(decl->kind)) + " but effect yields " +
                           std::string(to_string(v.kind())));
    }
    state.values[var] = coerce(decl->kind, v);
}

Trajectory interpolated(const EnvState& pre, const EnvState& post, const EnvironmentSpec& spec,
                        const StepConfig& config) {
    Trajectory t;
    if (!spec.continuous) {
        t.substates.push_back(post);
        return t;
    }
    const std::size_t k = config.substeps;
    for (std::size_t i = 0; i < k; ++i) {
        if (i + 1 == k) {
            t.substates.push_back(post);
            break;
        }
        EnvState s = pre;
        s.tick = pre.tick;
        double frac = static_cast<double>(i) / static_cast<double>(k - 1);
        for (const auto& decl : spec.state_vars) {
            if (decl.kind != ValueKind::Real) continue;
            double a = pre.values.at(decl.name).to_double();
            double b = post.values.at(decl.name).to_double();
            s.values[decl.name] = Value::real(a + (b - a) * frac);
        }
        t.substates.push_back(std::move(s));
    }
    return t;
}

void check_config(const EnvironmentSpec& spec, const StepConfig& config) {
    if (spec.continuous && config.substeps < 2) {
        throw EnvError("E-CONFIG", "", "continuous environments need at least 2 substeps");
    }
}

}  // namespace

StateTransition modif_state(const EnvState& state, const EnvironmentSpec& spec, std::span<const ActionSpec> catalogue,
                            std::span<const ActionInstance> actions, const StepConfig& config,
                            const AttributeReader& attributes) {
    check_config(spec, config);
    StateTransition out;
    out.state = state;
    out.state.tick = state.tick + 1;

    std::optional<SeededStream> stream;
    if (state.rng_seed) stream.emplace(*state.rng_seed, out.state.tick, 1);
    SeededStream* draws = stream ? &*stream : nullptr;

    for (const auto& instance : actions) {
        auto it = std::find_if(catalogue.begin(), catalogue.end(),
                               [&](const ActionSpec& a) { return a.name == instance.action; });
        if (it == catalogue.end()) {
            throw EnvError("E-UNKNOWN-ACTION", instance.action, "unknown action '" + instance.action + "'");
        }
        const ActionSpec& action = *it;
        if (instance.args.size() != action.params.size()) {
            throw EnvError("E-ARITY", action.name, "action '" + action.name + "' called with wrong arity");
        }
        std::map<std::string, Value, std::less<>> bound;
        for (std::size_t i = 0; i < action.params.size(); ++i) {
            const auto& p = action.params[i];
            if (!assignable(p.kind, instance.args[i])) {
                throw EnvError("E-KIND", p.name, "parameter '" + p.name + "' of '" + action.name + "' expects " +
                                                     std::string(to_string(p.kind)));
            }
            bound[p.name] = coerce(p.kind, instance.args[i]);
        }

        EnvState& current = out.state;
        ValueLookup lookup = [&](std::string_view n) -> std::optional<Value> {
            if (auto b = bound.find(n); b != bound.end()) return b->second;
            if (n.substr(0, 5) == "self.") {
                if (!attributes) return std::nullopt;
                return attributes(instance.actor, std::string(n.substr(5)));
            }
            auto v = current.values.find(std::string(n));
            if (v == current.values.end()) return std::nullopt;
            return v->second;
        };
        auto receiver = [&](const std::string& target) {
            if (auto b = bound.find(target); b != bound.end()) return b->second.display();
            return target;
        };

        for (const auto& effect : action.effects) {
            try {
                switch (effect.kind) {
                case EffectKind::Assign:
                    store(current, spec, effect.target, evaluate(effect.value, lookup, draws));
                    break;
                case EffectKind::AssignSelf:
                    out.deferred.push_back({EffectKind::AssignSelf, instance.actor, action.name, effect.target, {},
                                            evaluate(effect.value, lookup, draws), {}});
                    break;
                case EffectKind::Inform:
                    out.deferred.push_back({EffectKind::Inform, instance.actor, action.name, receiver(effect.target),
                                            effect.key, evaluate(effect.value, lookup, draws), {}});
                    break;
                case EffectKind::Ask:
                    out.deferred.push_back(
                        {EffectKind::Ask, instance.actor, action.name, receiver(effect.target), effect.key, {}, {}});
                    break;
                case EffectKind::Constrain:
                    out.deferred.push_back({EffectKind::Constrain, instance.actor, action.name,
                                            receiver(effect.target), {}, {}, effect.constraints});
                    break;
                case EffectKind::Partner:
                    out.deferred.push_back(
                        {EffectKind::Partner, instance.actor, action.name, receiver(effect.target), {}, {}, {}});
                    break;
                }
            } catch (const EvalError& e) {
                throw EnvError(e.code(), effect.target, "action '" + action.name + "': " + e.what());
            }
        }
    }
    out.trajectory = interpolated(state, out.state, spec, config);
    return out;
}

StateTransition autonomous_step_traced(const EnvState& state, const EnvironmentSpec& spec, const StepConfig& config) {
    check_config(spec, config);
    StateTransition out;
    out.state = state;
    if (spec.static_flag || spec.drift_rules.empty()) {
        std::size_t copies = spec.continuous ? config.substeps : 1;
        out.trajectory.substates.assign(copies, state);
        return out;
    }

    std::optional<SeededStream> stream;
    if (state.rng_seed) stream.emplace(*state.rng_seed, state.tick + 1, 0);
    SeededStream* draws = stream ? &*stream : nullptr;

    auto apply_assignments = [&](EnvState& s, bool skip_rates) {
        for (const auto& rule : spec.drift_rules) {
            const auto* decl = spec.find_state(rule.target);
            if (skip_rates && decl && decl->kind == ValueKind::Real) continue;
            try {
                store(s, spec, rule.target, evaluate(rule.expr, state_lookup(s), draws));
            } catch (const EvalError& e) {
                throw EnvError(e.code(), rule.target, std::string("drift: ") + e.what());
            }
        }
    };

    if (!spec.continuous) {
        apply_assignments(out.state, false);
        out.trajectory.substates.push_back(out.state);
        return out;
    }

    // Real variables integrate their rate with explicit Euler over K-1
    // substeps of dt/(K-1); the other drift rules land on the final substate.
    const std::size_t k = config.substeps;
    const double h = config.dt / static_cast<double>(k - 1);
    EnvState cur = state;
    out.trajectory.substates.push_back(cur);
    for (std::size_t step = 1; step < k; ++step) {
        std::vector<std::pair<std::string, double>> rates;
        for (const auto& rule : spec.drift_rules) {
            const auto* decl = spec.find_state(rule.target);
            if (decl == nullptr || decl->kind != ValueKind::Real) continue;
            try {
                rates.emplace_back(rule.target, evaluate(rule.expr, state_lookup(cur), draws).to_double());
            } catch (const EvalError& e) {
                throw EnvError(e.code(), rule.target, std::string("drift: ") + e.what());
            }
        }
        for (const auto& [name, rate] : rates) {
            cur.values[name] = Value::real(cur.values.at(name).to_double() + h * rate);
        }
        if (step + 1 == k) apply_assignments(cur, true);
        out.trajectory.substates.push_back(cur);
    }
    out.state = cur;
    return out;
}

EnvState autonomous_step(const EnvState& state, const EnvironmentSpec& spec, const StepConfig& config) {
    return autonomous_step_traced(state, spec, config).state;
}

}  // namespace masforge
