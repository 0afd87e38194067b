#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "masforge/environment.hpp"
#include "masforge/message.hpp"
#include "masforge/metamodel.hpp"

namespace masforge {

enum class BeliefOrigin { Initial, Percept };
std::string_view to_string(BeliefOrigin o);

/// A revisable piece of world information. At most one per key.
struct Belief {
    std::string key;
    Value value;
    std::uint64_t tick = 0;
    BeliefOrigin origin = BeliefOrigin::Initial;

    bool operator==(const Belief&) const = default;
};

using BeliefSet = std::map<std::string, Belief>;
/// Facts held true for the agent's lifetime; only change_information edits them.
using KnowledgeBase = std::map<std::string, Value>;

struct Desire {
    std::string goal;
    long priority = 0;
    std::set<std::string> conflicts;

    bool operator==(const Desire&) const = default;
};

enum class IntentionStatus { Active, Suspended, Done };
std::string_view to_string(IntentionStatus s);

/// Committed goal with its plan. `status == Done` exactly when the cursor
/// has passed the last step.
struct Intention {
    std::string goal;
    std::vector<ActionCall> plan;
    std::size_t cursor = 0;
    IntentionStatus status = IntentionStatus::Active;

    bool operator==(const Intention&) const = default;
};

using IntentionSet = std::map<std::string, Intention>;
using PlanLibrary = std::map<std::string, std::vector<ActionCall>>;

/// A representation slot's latest value and who supplied it.
struct RepresentedFact {
    Value value;
    std::string origin;  // self, environment name, or the relaying agent

    bool operator==(const RepresentedFact&) const = default;
};

struct CognitionConfig {
    long commitment_bonus = 1;
};

/// Per-agent deliberation state, owned by the scheduler.
struct CognitionState {
    BeliefSet beliefs;
    KnowledgeBase knowledge;
    std::map<std::string, RepresentedFact> representations;
    std::vector<DesireRule> desire_rules;
    std::vector<GoalRule> goals;
    IntentionSet intentions;
    PlanLibrary plans;
    std::vector<ScoreEntry> scores;

    bool operator==(const CognitionState&) const = default;
};

CognitionState initial_cognition(const AgentSpec& spec);

// --- BDI pipeline ----------------------------------------------------------

struct RevisionResult {
    BeliefSet beliefs;
    std::vector<std::string> warnings;
};

/// Per key the entry with the greatest tick wins (a percept beats a belief
/// of equal tick; later percepts beat earlier ones of equal tick). Percepts
/// contradicting a knowledge fact are discarded with a warning; percepts
/// restating one are dropped silently.
RevisionResult revise_beliefs(std::span<const Percept> percepts, const BeliefSet& beliefs, const KnowledgeBase& kb);

/// Symmetric closure of the declared conflict lists.
std::map<std::string, std::set<std::string>> conflict_closure(std::span<const DesireRule> rules);

/// Desires of every rule whose guard holds, minus goals already done,
/// sorted by (priority desc, goal asc).
std::vector<Desire> generate_desires(const BeliefSet& beliefs, const IntentionSet& intentions,
                                     std::span<const DesireRule> rules);

/// Greedy maximal consistent subset in (effective priority desc, goal asc)
/// order, where goals with an active intention get the commitment bonus.
std::vector<Desire> filter_desires(std::span<const Desire> desires, const IntentionSet& intentions,
                                   const CognitionConfig& config = {});

struct Selection {
    std::vector<ActionInstance> actions;
    std::vector<std::string> goals;  // goal that produced each action
    IntentionSet intentions;
};

/// Instantiates intentions for newly admitted goals, emits the next plan
/// step of each surviving intention and suspends the filtered-out ones.
/// Throws ModelError("E-NO-PLAN") for a surviving goal with no plan.
Selection actions_selection(std::span<const Desire> filtered, const IntentionSet& intentions, const PlanLibrary& plans,
                            const std::string& actor, std::uint64_t tick, const ValueLookup& scope = {});

/// Score of `action` under the table: the best entry whose condition holds,
/// or zero.
double performance_score(const std::string& action, std::span<const ScoreEntry> scores, const ValueLookup& view);

/// Index of the argmax candidate; ties go to the smaller action name, then
/// to the earlier candidate. Throws ModelError("E-NO-CANDIDATE") when empty.
std::size_t choose_by_performance(std::span<const ActionInstance> candidates, std::span<const ScoreEntry> scores,
                                  const ValueLookup& view);

ActionInstance measure_performance(std::span<const Percept> percepts, const BeliefSet& beliefs,
                                   std::span<const ActionInstance> candidates, std::span<const ScoreEntry> scores);

// --- Decide / Communicate / Change_information ----------------------------

struct DecideResult {
    std::vector<ActionInstance> actions;  // empty: the agent decided not to act
    CognitionState state;
    std::vector<std::string> notes;
};

/// Cognitive, Communicative and Adaptive agents fire their best holding
/// goal; Intentional and Rational agents run revise, generate, filter and
/// select (Rational then keeps the best-performing candidate).
DecideResult decide(const AgentSpec& spec, const CognitionState& state, const std::map<std::string, Value>& attributes,
                    std::span<const Percept> percepts, std::uint64_t tick, const CognitionConfig& config = {});

/// Records percepts that land on representation slots.
void absorb_representations(CognitionState& state, const AgentSpec& spec, std::span<const Percept> percepts);

/// One Inform per (representation fact, linked peer), ordered by (key,
/// peer); a fact is never sent back to the agent it came from.
std::vector<Message> communicate(const AgentSpec& spec, const CognitionState& state, MessageBus& bus);

struct ChangeEvent {
    std::map<std::string, Value> knowledge;
    std::map<std::string, long> priorities;

    bool empty() const { return knowledge.empty() && priorities.empty(); }
};

/// Replaces the named knowledge facts and goal priorities atomically.
/// Unknown keys throw ModelError("E-UNKNOWN-KEY") before anything changes.
CognitionState change_information(const CognitionState& state, const ChangeEvent& event);

std::string describe(const ChangeEvent& event);

}  // namespace masforge
