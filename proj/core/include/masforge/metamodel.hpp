#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "masforge/diagnostics.hpp"
#include "masforge/expr.hpp"
#include "masforge/value.hpp"

namespace masforge {

/// Agent class hierarchy. `Agent` is the abstract root: it appears in
/// ancestor chains but a declared agent must name one of the six concrete
/// kinds.
enum class AgentKind { Agent, Reactive, Cognitive, Communicative, Adaptive, Intentional, Rational };

inline constexpr AgentKind kConcreteKinds[] = {AgentKind::Reactive,    AgentKind::Cognitive,
                                               AgentKind::Communicative, AgentKind::Adaptive,
                                               AgentKind::Intentional, AgentKind::Rational};

std::string_view to_string(AgentKind kind);
std::optional<AgentKind> parse_agent_kind(std::string_view word);

std::optional<AgentKind> parent(AgentKind kind);
/// Ancestor chain, child first, ending at the abstract root.
std::vector<AgentKind> kind_family(AgentKind kind);
/// Cognitive and its three specializations.
bool cognitive_family(AgentKind kind);
bool is_bdi(AgentKind kind);

/// Optional agent sections whose presence depends on the kind.
enum class Section {
    Beliefs,
    Intentions,
    DesireRules,
    Representations,
    Knowledge,
    StimulusRules,
    Goals,
    Scores,
};

/// The six sections covered by the kind-section matrix.
inline constexpr Section kMatrixSections[] = {Section::Beliefs,         Section::Intentions,
                                              Section::DesireRules,     Section::Representations,
                                              Section::Knowledge,       Section::StimulusRules};

std::string_view to_string(Section s);
bool section_allowed(AgentKind kind, Section s);

enum class PerceptSource { Environment, Agent };
std::string_view to_string(PerceptSource s);

struct NamedItem {
    std::string name;
    SourceLoc loc;
    bool operator==(const NamedItem&) const = default;
};

struct PerceptDecl {
    std::string name;
    PerceptSource source = PerceptSource::Environment;
    ValueKind kind = ValueKind::Int;
    SourceLoc loc;
    bool operator==(const PerceptDecl&) const = default;
};

struct AttributeDecl {
    std::string name;
    ValueKind kind = ValueKind::Int;
    Value initial;
    SourceLoc loc;
    bool operator==(const AttributeDecl&) const = default;
};

/// `key = literal`, used for knowledge-base facts and initial beliefs.
struct FactDecl {
    std::string key;
    Value value;
    SourceLoc loc;
    bool operator==(const FactDecl&) const = default;
};

/// Invocation of a declared action with argument expressions.
struct ActionCall {
    std::string action;
    std::vector<Expr> args;
    SourceLoc loc;
    bool operator==(const ActionCall&) const = default;
};

struct DesireRule {
    std::string goal;
    long priority = 0;
    Guard guard;
    std::vector<std::string> conflicts;
    SourceLoc loc;
    bool operator==(const DesireRule&) const = default;
};

struct IntentionDecl {
    std::string goal;
    std::vector<ActionCall> plan;
    SourceLoc loc;
    bool operator==(const IntentionDecl&) const = default;
};

/// Stimulus-action rule: `rule on event(binding) when guard => action(args)`.
struct ReactiveRule {
    std::string event;
    std::vector<std::string> bindings;
    Guard guard;
    ActionCall action;
    SourceLoc loc;
    bool operator==(const ReactiveRule&) const = default;
};

/// Goal of a non-BDI cognitive agent, consulted by Decide.
struct GoalRule {
    std::string goal;
    long priority = 0;
    Guard guard;
    ActionCall action;
    SourceLoc loc;
    bool operator==(const GoalRule&) const = default;
};

/// Rational performance table entry: (action, belief condition) -> score.
struct ScoreEntry {
    std::string action;
    Guard guard;
    double score = 0.0;
    SourceLoc loc;
    bool operator==(const ScoreEntry&) const = default;
};

struct AgentSpec {
    std::string name;
    AgentKind kind = AgentKind::Reactive;
    std::vector<NamedItem> roles;
    std::vector<PerceptDecl> perceptions;
    std::vector<AttributeDecl> attributes;
    std::vector<NamedItem> representations;
    std::vector<FactDecl> knowledge;
    std::vector<FactDecl> beliefs;
    std::vector<DesireRule> desires;
    std::vector<IntentionDecl> intentions;
    std::vector<ReactiveRule> rules;
    std::vector<GoalRule> goals;
    std::vector<ScoreEntry> scores;
    SourceLoc loc;

    bool has_section(Section s) const;
    const PerceptDecl* find_perception(std::string_view name) const;
    const AttributeDecl* find_attribute(std::string_view name) const;
    const IntentionDecl* find_intention(std::string_view goal) const;

    bool operator==(const AgentSpec&) const = default;
};

struct StateVarDecl {
    std::string name;
    ValueKind kind = ValueKind::Int;
    Value initial;
    SourceLoc loc;
    bool operator==(const StateVarDecl&) const = default;
};

/// `drift x := expr`. In a continuous environment a drift on a real variable
/// is a rate (dx/dt); every other drift is an assignment applied once a tick.
struct DriftRule {
    std::string target;
    Expr expr;
    SourceLoc loc;
    bool operator==(const DriftRule&) const = default;
};

/// Name of the percept every environment exposes implicitly.
inline constexpr std::string_view kAgentCountPercept = "agent_count";

struct EnvironmentSpec {
    std::string name;
    bool deterministic = true;
    bool static_flag = true;
    bool continuous = false;
    std::vector<StateVarDecl> state_vars;
    std::vector<PerceptDecl> perceptions;  // source is always Environment
    std::vector<DriftRule> drift_rules;
    SourceLoc loc;

    const StateVarDecl* find_state(std::string_view name) const;
    bool exposes(std::string_view percept) const;

    bool operator==(const EnvironmentSpec&) const = default;
};

struct ParamDecl {
    std::string name;
    ValueKind kind = ValueKind::Int;
    SourceLoc loc;
    bool operator==(const ParamDecl&) const = default;
};

enum class EffectKind {
    Assign,      // state_var := expr
    AssignSelf,  // self.attribute := expr
    Inform,      // inform <agent> key = expr
    Ask,         // ask <agent> key
    Constrain,   // constrain <agent> c1, c2
    Partner,     // partner <agent>
};

/// One statement of an action body. For the messaging statements `target`
/// names an agent directly or a symbol parameter holding the agent name.
struct Effect {
    EffectKind kind = EffectKind::Assign;
    std::string target;
    std::string key;
    Expr value;
    std::vector<std::string> constraints;
    SourceLoc loc;
    bool operator==(const Effect&) const = default;
};

struct ActionSpec {
    std::string name;
    std::string actor;
    std::vector<ParamDecl> params;
    std::vector<Effect> effects;
    SourceLoc loc;

    /// State variables this action can write.
    std::vector<std::string> write_set() const;

    bool operator==(const ActionSpec&) const = default;
};

enum class Performative { Inform, GetInformation, InformAboutConstraints, AcceptPartnership, Reply };
std::string_view to_string(Performative p);
std::optional<Performative> parse_performative(std::string_view word);

struct InteractionSpec {
    std::string initiator;
    std::string responder;
    bool reflexive = false;
    std::vector<Performative> allowed;
    SourceLoc loc;

    bool permits(Performative p) const;
    bool operator==(const InteractionSpec&) const = default;
};

struct ModelSpec {
    std::string name;
    EnvironmentSpec environment;
    std::vector<AgentSpec> agents;
    std::vector<ActionSpec> actions;
    std::vector<InteractionSpec> interactions;

    const AgentSpec* find_agent(std::string_view name) const;
    const ActionSpec* find_action(std::string_view name) const;
    /// Interactions are undirected: either endpoint may initiate.
    bool permits(std::string_view a, std::string_view b, Performative p) const;

    bool operator==(const ModelSpec&) const = default;
};

/// Checks every structural rule of the meta-model. Pure and total: problems
/// become diagnostics in declaration order.
ValidationReport validate_model(const ModelSpec& model);

/// Thrown by operations that require a validated model.
class ModelError : public std::runtime_error {
public:
    ModelError(std::string code, const std::string& message, ValidationReport report = {})
        : std::runtime_error(message), code_(std::move(code)), report_(std::move(report)) {}
    const std::string& code() const { return code_; }
    const ValidationReport& report() const { return report_; }

private:
    std::string code_;
    ValidationReport report_;
};

// ---------------------------------------------------------------------------
// Flat class model: agent, environment and association classes with their
// attribute and operation sections merged.

enum class FlatClassRole { Environment, Agent, Action, Interaction };
std::string_view to_string(FlatClassRole r);

struct FlatAttribute {
    std::string section;  // role, perception, attribute, belief, intention, representation, state, flag
    std::string name;
    std::string type;
    bool operator==(const FlatAttribute&) const = default;
};

struct FlatClass {
    std::string title;
    FlatClassRole role = FlatClassRole::Agent;
    std::string stereotype;  // agent kind, "environment", "action", "interaction"
    std::vector<FlatAttribute> attributes;
    std::vector<std::string> operations;
    bool operator==(const FlatClass&) const = default;
};

struct FlatClassModel {
    std::string model_name;
    std::vector<FlatClass> classes;

    const FlatClass* find(std::string_view title) const;
    bool operator==(const FlatClassModel&) const = default;
};

/// Operation names a class of the given kind carries, inherited ones first.
std::vector<std::string> kind_operations(AgentKind kind);

std::string interaction_title(const InteractionSpec& interaction);

/// Throws ModelError("E-UNVALIDATED") when the model does not validate.
FlatClassModel flatten(const ModelSpec& model);

}  // namespace masforge
