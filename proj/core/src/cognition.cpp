#include "masforge/cognition.hpp"

#include <algorithm>

namespace masforge {

std::string_view to_string(BeliefOrigin o) {
    switch (o) {
    case BeliefOrigin::Initial: return "initial";
    case BeliefOrigin::Percept: return "percept";
    }
    return "?";
}

std::string_view to_string(IntentionStatus s) {
    switch (s) {
    case IntentionStatus::Active: return "active";
    case IntentionStatus::Suspended: return "suspended";
    case IntentionStatus::Done: return "done";
    }
    return "?";
}

CognitionState initial_cognition(const AgentSpec& spec) {
    CognitionState state;
    for (const auto& b : spec.beliefs) state.beliefs[b.key] = {b.key, b.value, 0, BeliefOrigin::Initial};
    for (const auto& f : spec.knowledge) state.knowledge[f.key] = f.value;
    state.desire_rules = spec.desires;
    state.goals = spec.goals;
    for (const auto& i : spec.intentions) state.plans[i.goal] = i.plan;
    state.scores = spec.scores;
    return state;
}

RevisionResult revise_beliefs(std::span<const Percept> percepts, const BeliefSet& beliefs, const KnowledgeBase& kb) {
    RevisionResult out{beliefs, {}};
    for (const auto& p : percepts) {
        if (auto known = kb.find(p.name); known != kb.end()) {
            if (!(known->second == p.value)) {
                out.warnings.push_back("percept " + p.name + "=" + p.value.literal() + " from " + p.source +
                                       " contradicts knowledge " + p.name + "=" + known->second.literal());
            }
            continue;
        }
        auto it = out.beliefs.find(p.name);
        if (it == out.beliefs.end() || p.tick >= it->second.tick) {
            out.beliefs[p.name] = {p.name, p.value, p.tick, BeliefOrigin::Percept};
        }
    }
    return out;
}

std::map<std::string, std::set<std::string>> conflict_closure(std::span<const DesireRule> rules) {
    std::map<std::string, std::set<std::string>> closure;
    for (const auto& r : rules) {
        closure[r.goal];
        for (const auto& c : r.conflicts) {
            if (c == r.goal) continue;
            closure[r.goal].insert(c);
            closure[c].insert(r.goal);
        }
    }
    return closure;
}

namespace {

ValueLookup belief_view(const BeliefSet& beliefs) {
    return [&beliefs](std::string_view key) -> std::optional<Value> {
        auto it = beliefs.find(std::string(key));
        if (it == beliefs.end()) return std::nullopt;
        return it->second.value;
    };
}

bool desire_order(const Desire& a, const Desire& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.goal < b.goal;
}

bool active(const IntentionSet& intentions, const std::string& goal) {
    auto it = intentions.find(goal);
    return it != intentions.end() && it->second.status == IntentionStatus::Active;
}

std::vector<Value> bind_args(const ActionCall& call, const ValueLookup& scope) {
    std::vector<Value> args;
    ValueLookup none = [](std::string_view) -> std::optional<Value> { return std::nullopt; };
    for (const auto& a : call.args) args.push_back(evaluate(a, scope ? scope : none));
    return args;
}

}  // namespace

std::vector<Desire> generate_desires(const BeliefSet& beliefs, const IntentionSet& intentions,
                                     std::span<const DesireRule> rules) {
    auto closure = conflict_closure(rules);
    auto view = belief_view(beliefs);
    std::vector<Desire> out;
    for (const auto& rule : rules) {
        if (!holds(rule.guard, view)) continue;
        auto it = intentions.find(rule.goal);
        if (it != intentions.end() && it->second.status == IntentionStatus::Done) continue;
        out.push_back({rule.goal, rule.priority, closure[rule.goal]});
    }
    std::sort(out.begin(), out.end(), desire_order);
    return out;
}

std::vector<Desire> filter_desires(std::span<const Desire> desires, const IntentionSet& intentions,
                                   const CognitionConfig& config) {
    std::vector<std::pair<long, const Desire*>> ranked;
    ranked.reserve(desires.size());
    for (const auto& d : desires) {
        ranked.emplace_back(d.priority + (active(intentions, d.goal) ? config.commitment_bonus : 0), &d);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second->goal < b.second->goal;
    });

    std::vector<Desire> accepted;
    for (const auto& [effective, d] : ranked) {
        bool clash = std::any_of(accepted.begin(), accepted.end(), [&](const Desire& a) {
            return a.conflicts.count(d->goal) > 0 || d->conflicts.count(a.goal) > 0;
        });
        if (!clash) accepted.push_back(*d);
    }
    return accepted;
}

Selection actions_selection(std::span<const Desire> filtered, const IntentionSet& intentions, const PlanLibrary& plans,
                            const std::string& actor, std::uint64_t tick, const ValueLookup& scope) {
    Selection out;
    out.intentions = intentions;
    std::set<std::string> admitted;
    for (const auto& d : filtered) {
        admitted.insert(d.goal);
        auto it = out.intentions.find(d.goal);
        if (it == out.intentions.end()) {
            auto plan = plans.find(d.goal);
            if (plan == plans.end()) {
                throw ModelError("E-NO-PLAN", "goal '" + d.goal + "' of '" + actor + "' has no plan");
            }
            Intention fresh{d.goal, plan->second, 0, IntentionStatus::Active};
            if (fresh.plan.empty()) fresh.status = IntentionStatus::Done;
            it = out.intentions.emplace(d.goal, std::move(fresh)).first;
        }
        Intention& intention = it->second;
        if (intention.status == IntentionStatus::Done) continue;
        intention.status = IntentionStatus::Active;
        const ActionCall& step = intention.plan[intention.cursor];
        out.actions.push_back({step.action, actor, bind_args(step, scope), tick});
        out.goals.push_back(d.goal);
        if (++intention.cursor == intention.plan.size()) intention.status = IntentionStatus::Done;
    }
    for (auto& [goal, intention] : out.intentions) {
        if (!admitted.count(goal) && intention.status == IntentionStatus::Active) {
            intention.status = IntentionStatus::Suspended;
        }
    }
    return out;
}

double performance_score(const std::string& action, std::span<const ScoreEntry> scores, const ValueLookup& view) {
    std::optional<double> best;
    for (const auto& s : scores) {
        if (s.action != action || !holds(s.guard, view)) continue;
        if (!best || s.score > *best) best = s.score;
    }
    return best.value_or(0.0);
}

std::size_t choose_by_performance(std::span<const ActionInstance> candidates, std::span<const ScoreEntry> scores,
                                  const ValueLookup& view) {
    if (candidates.empty()) throw ModelError("E-NO-CANDIDATE", "no candidate action to measure");
    std::size_t best = 0;
    double best_score = performance_score(candidates[0].action, scores, view);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        double s = performance_score(candidates[i].action, scores, view);
        if (s > best_score || (s == best_score && candidates[i].action < candidates[best].action)) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

namespace {

// Beliefs overlaid with this tick's percepts (latest percept per name wins).
ValueLookup percept_belief_view(std::span<const Percept> percepts, const BeliefSet& beliefs) {
    return [percepts, &beliefs](std::string_view key) -> std::optional<Value> {
        for (auto it = percepts.rbegin(); it != percepts.rend(); ++it) {
            if (it->name == key) return it->value;
        }
        auto b = beliefs.find(std::string(key));
        if (b == beliefs.end()) return std::nullopt;
        return b->second.value;
    };
}

}  // namespace

ActionInstance measure_performance(std::span<const Percept> percepts, const BeliefSet& beliefs,
                                   std::span<const ActionInstance> candidates, std::span<const ScoreEntry> scores) {
    return candidates[choose_by_performance(candidates, scores, percept_belief_view(percepts, beliefs))];
}

namespace {

DecideResult decide_by_goals(const AgentSpec& spec, const CognitionState& state,
                             const std::map<std::string, Value>& attributes, std::span<const Percept> percepts,
                             std::uint64_t tick) {
    DecideResult out{{}, state, {}};
    ValueLookup view = [&](std::string_view key) -> std::optional<Value> {
        for (auto it = percepts.rbegin(); it != percepts.rend(); ++it) {
            if (it->name == key) return it->value;
        }
        std::string k(key);
        if (auto r = state.representations.find(k); r != state.representations.end()) return r->second.value;
        if (auto f = state.knowledge.find(k); f != state.knowledge.end()) return f->second;
        if (auto a = attributes.find(k); a != attributes.end()) return a->second;
        return std::nullopt;
    };
    const GoalRule* best = nullptr;
    for (const auto& g : state.goals) {
        if (!holds(g.guard, view)) continue;
        if (best == nullptr || g.priority > best->priority || (g.priority == best->priority && g.goal < best->goal)) {
            best = &g;
        }
    }
    if (best != nullptr) {
        ValueLookup attrs = [&](std::string_view key) -> std::optional<Value> {
            if (auto a = attributes.find(std::string(key)); a != attributes.end()) return a->second;
            return std::nullopt;
        };
        out.actions.push_back({best->action.action, spec.name, bind_args(best->action, attrs), tick});
    }
    return out;
}

}  // namespace

DecideResult decide(const AgentSpec& spec, const CognitionState& state, const std::map<std::string, Value>& attributes,
                    std::span<const Percept> percepts, std::uint64_t tick, const CognitionConfig& config) {
    if (!is_bdi(spec.kind)) return decide_by_goals(spec, state, attributes, percepts, tick);

    DecideResult out{{}, state, {}};
    auto revised = revise_beliefs(percepts, state.beliefs, state.knowledge);
    out.state.beliefs = revised.beliefs;
    for (auto& w : revised.warnings) out.notes.push_back(spec.name + ": " + w);

    auto desires = generate_desires(out.state.beliefs, state.intentions, state.desire_rules);
    auto filtered = filter_desires(desires, state.intentions, config);
    std::vector<Desire> planned;
    for (auto& d : filtered) {
        if (state.intentions.count(d.goal) || state.plans.count(d.goal)) {
            planned.push_back(std::move(d));
        } else {
            out.notes.push_back(spec.name + ": E-NO-PLAN goal " + d.goal + " skipped");
        }
    }

    ValueLookup attrs = [&](std::string_view key) -> std::optional<Value> {
        if (auto a = attributes.find(std::string(key)); a != attributes.end()) return a->second;
        return std::nullopt;
    };
    auto selection = actions_selection(planned, state.intentions, state.plans, spec.name, tick, attrs);

    if (spec.kind == AgentKind::Rational && !selection.actions.empty()) {
        std::size_t chosen = choose_by_performance(selection.actions, state.scores,
                                                   percept_belief_view(percepts, out.state.beliefs));
        for (std::size_t i = 0; i < selection.actions.size(); ++i) {
            if (i == chosen) continue;
            Intention& undo = selection.intentions.at(selection.goals[i]);
            --undo.cursor;
            undo.status = IntentionStatus::Active;
        }
        selection.actions = {selection.actions[chosen]};
        selection.goals = {selection.goals[chosen]};
    }

    for (const auto& [goal, after] : selection.intentions) {
        auto before = state.intentions.find(goal);
        bool was_active = before != state.intentions.end() && before->second.status == IntentionStatus::Active;
        if (was_active && after.status == IntentionStatus::Suspended) {
            out.notes.push_back(spec.name + ": suspended intention " + goal + " at step " +
                                std::to_string(after.cursor));
        }
    }
    out.state.intentions = std::move(selection.intentions);
    out.actions = std::move(selection.actions);
    return out;
}

void absorb_representations(CognitionState& state, const AgentSpec& spec, std::span<const Percept> percepts) {
    for (const auto& p : percepts) {
        bool slot = std::any_of(spec.representations.begin(), spec.representations.end(),
                                [&](const NamedItem& r) { return r.name == p.name; });
        if (slot) state.representations[p.name] = {p.value, p.source};
    }
}

std::vector<Message> communicate(const AgentSpec& spec, const CognitionState& state, MessageBus& bus) {
    std::vector<Message> out;
    auto peers = bus.peers(spec.name, Performative::Inform);
    for (const auto& [key, fact] : state.representations) {
        for (const auto& peer : peers) {
            if (peer == fact.origin || peer == spec.name) continue;
            out.push_back(bus.inform(spec.name, peer, key, fact.value));
        }
    }
    return out;
}

CognitionState change_information(const CognitionState& state, const ChangeEvent& event) {
    for (const auto& [key, value] : event.knowledge) {
        if (!state.knowledge.count(key)) {
            throw ModelError("E-UNKNOWN-KEY", "no knowledge fact '" + key + "'");
        }
    }
    auto has_goal = [&](const std::string& g) {
        return std::any_of(state.goals.begin(), state.goals.end(), [&](const GoalRule& r) { return r.goal == g; }) ||
               std::any_of(state.desire_rules.begin(), state.desire_rules.end(),
                           [&](const DesireRule& r) { return r.goal == g; });
    };
    for (const auto& [goal, priority] : event.priorities) {
        if (!has_goal(goal)) throw ModelError("E-UNKNOWN-KEY", "no goal '" + goal + "'");
    }

    CognitionState out = state;
    for (const auto& [key, value] : event.knowledge) out.knowledge[key] = value;
    for (const auto& [goal, priority] : event.priorities) {
        for (auto& g : out.goals) {
            if (g.goal == goal) g.priority = priority;
        }
        for (auto& d : out.desire_rules) {
            if (d.goal == goal) d.priority = priority;
        }
    }
    return out;
}

std::string describe(const ChangeEvent& event) {
    std::string s = "change_information";
    for (const auto& [k, v] : event.knowledge) s += " knowledge " + k + "=" + v.literal();
    for (const auto& [g, p] : event.priorities) s += " priority " + g + "=" + std::to_string(p);
    return s;
}

}  // namespace masforge
