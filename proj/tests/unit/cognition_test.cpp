#include <gtest/gtest.h>

#include "masforge/cognition.hpp"
#include "testkit.hpp"

using namespace masforge;
using testkit::model_of;

namespace {

DesireRule rule(std::string goal, long priority, std::vector<std::string> conflicts = {}, Guard guard = {}) {
    return {std::move(goal), priority, std::move(guard), std::move(conflicts), {}};
}

std::vector<std::string> goals_of(const std::vector<Desire>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.push_back(d.goal);
    return out;
}

Guard when_eq(std::string key, Value v) {
    return Guard{{{std::move(key), CmpOp::Eq, std::move(v), {}}}};
}

ActionCall call(std::string name) {
    return {std::move(name), {}, {}};
}

}  // namespace

TEST(ReviseBeliefs, RecencyWins) {
    BeliefSet b{{"k", {"k", Value::integer(1), 2, BeliefOrigin::Initial}}};
    std::vector<Percept> ps{{"Env", "k", Value::integer(2), 5}};
    auto r = revise_beliefs(ps, b, {});
    ASSERT_EQ(r.beliefs.size(), 1u);
    EXPECT_EQ(r.beliefs.at("k").value, Value::integer(2));
    EXPECT_EQ(r.beliefs.at("k").tick, 5u);
    EXPECT_EQ(r.beliefs.at("k").origin, BeliefOrigin::Percept);
}

TEST(ReviseBeliefs, StalePerceptLoses) {
    BeliefSet b{{"k", {"k", Value::integer(1), 9, BeliefOrigin::Percept}}};
    std::vector<Percept> ps{{"Env", "k", Value::integer(2), 5}};
    EXPECT_EQ(revise_beliefs(ps, b, {}).beliefs, b);
}

TEST(ReviseBeliefs, KnowledgeWinsWithWarning) {
    BeliefSet b{{"level", {"level", Value::integer(1), 0, BeliefOrigin::Initial}}};
    KnowledgeBase kb{{"door", Value::symbol("locked")}};
    std::vector<Percept> ps{{"Env", "door", Value::symbol("open"), 3}};
    auto r = revise_beliefs(ps, b, kb);
    EXPECT_EQ(r.beliefs, b);
    EXPECT_EQ(r.warnings.size(), 1u);
    std::vector<Percept> same{{"Env", "door", Value::symbol("locked"), 3}};
    auto quiet = revise_beliefs(same, b, kb);
    EXPECT_EQ(quiet.beliefs, b);
    EXPECT_TRUE(quiet.warnings.empty());
}

TEST(ReviseBeliefs, RevisedEntriesArePerceptOrigin) {
    auto r = revise_beliefs(std::vector<Percept>{{"Peer", "k", Value::integer(1), 1}}, {}, {});
    EXPECT_EQ(r.beliefs.at("k").origin, BeliefOrigin::Percept);
}

TEST(ConflictClosure, IsSymmetric) {
    std::vector<DesireRule> rules{rule("a", 1, {"b"}), rule("b", 1), rule("c", 1, {"a"})};
    auto c = conflict_closure(rules);
    EXPECT_EQ(c["a"], (std::set<std::string>{"b", "c"}));
    EXPECT_EQ(c["b"], std::set<std::string>{"a"});
    EXPECT_EQ(c["c"], std::set<std::string>{"a"});
}

TEST(GenerateDesires, NoGuardHolds) {
    std::vector<DesireRule> rules{rule("g", 1, {}, when_eq("k", Value::integer(1)))};
    EXPECT_TRUE(generate_desires({}, {}, rules).empty());
}

TEST(GenerateDesires, DoneGoalsExcluded) {
    std::vector<DesireRule> rules{rule("g1", 1), rule("g2", 2)};
    IntentionSet is{{"g2", {"g2", {call("x")}, 1, IntentionStatus::Done}}};
    EXPECT_EQ(goals_of(generate_desires({}, is, rules)), std::vector<std::string>{"g1"});
}

TEST(GenerateDesires, SortedByPriorityThenGoal) {
    std::vector<DesireRule> rules{rule("p5", 5), rule("p3", 3), rule("p4", 4), rule("a4", 4)};
    EXPECT_EQ(goals_of(generate_desires({}, {}, rules)), (std::vector<std::string>{"p5", "a4", "p4", "p3"}));
}

TEST(Filter, HandTracedExample) {
    std::vector<DesireRule> rules{rule("a", 5, {"c"}), rule("b", 3), rule("c", 4)};
    auto desires = generate_desires({}, {}, rules);
    auto kept = filter_desires(desires, {});
    std::set<std::string> got;
    for (const auto& d : kept) got.insert(d.goal);
    EXPECT_EQ(got, (std::set<std::string>{"a", "b"}));
}

TEST(Filter, NoConflictsKeepsEverything) {
    std::vector<DesireRule> rules{rule("a", 1), rule("b", 7), rule("c", 4)};
    auto desires = generate_desires({}, {}, rules);
    EXPECT_EQ(filter_desires(desires, {}), desires);
}

TEST(Filter, AllConflictingKeepsBestThenLeastName) {
    std::vector<DesireRule> rules{rule("b", 4, {"a", "c"}), rule("a", 4, {"c"}), rule("c", 2)};
    auto kept = filter_desires(generate_desires({}, {}, rules), {});
    EXPECT_EQ(goals_of(kept), std::vector<std::string>{"a"});
}

TEST(Filter, CommitmentBonusKeepsActiveIntention) {
    std::vector<DesireRule> rules{rule("new", 4, {"old"}), rule("old", 4)};
    auto desires = generate_desires({}, {}, rules);
    IntentionSet active{{"old", {"old", {call("x"), call("y")}, 1, IntentionStatus::Active}}};
    EXPECT_EQ(goals_of(filter_desires(desires, active)), std::vector<std::string>{"old"});
    CognitionConfig no_bonus;
    no_bonus.commitment_bonus = 0;
    EXPECT_EQ(goals_of(filter_desires(desires, active, no_bonus)), std::vector<std::string>{"new"});
}

TEST(ActionsSelection, EmptyFilterSuspendsEverything) {
    IntentionSet is{{"g", {"g", {call("x")}, 0, IntentionStatus::Active}}};
    auto sel = actions_selection({}, is, {}, "A", 1);
    EXPECT_TRUE(sel.actions.empty());
    EXPECT_EQ(sel.intentions.at("g").status, IntentionStatus::Suspended);
}

TEST(ActionsSelection, CursorAdvancesToDone) {
    PlanLibrary plans{{"g", {call("x"), call("y")}}};
    std::vector<Desire> filtered{{"g", 1, {}}};
    auto first = actions_selection(filtered, {}, plans, "A", 1);
    ASSERT_EQ(first.actions.size(), 1u);
    EXPECT_EQ(first.actions[0].action, "x");
    auto second = actions_selection(filtered, first.intentions, plans, "A", 2);
    ASSERT_EQ(second.actions.size(), 1u);
    EXPECT_EQ(second.actions[0].action, "y");
    EXPECT_EQ(second.intentions.at("g").status, IntentionStatus::Done);
    EXPECT_EQ(second.intentions.at("g").cursor, 2u);
}

TEST(ActionsSelection, SuspendedGoalResumesAtItsCursor) {
    PlanLibrary plans{{"g", {call("x"), call("y"), call("z")}}};
    std::vector<Desire> filtered{{"g", 1, {}}};
    auto s1 = actions_selection(filtered, {}, plans, "A", 1);
    auto s2 = actions_selection({}, s1.intentions, plans, "A", 2);
    EXPECT_EQ(s2.intentions.at("g").status, IntentionStatus::Suspended);
    EXPECT_EQ(s2.intentions.at("g").cursor, 1u);
    auto s3 = actions_selection(filtered, s2.intentions, plans, "A", 3);
    ASSERT_EQ(s3.actions.size(), 1u);
    EXPECT_EQ(s3.actions[0].action, "y");
    EXPECT_EQ(s3.intentions.at("g").status, IntentionStatus::Active);
}

TEST(ActionsSelection, SurvivingGoalWithoutPlan) {
    std::vector<Desire> filtered{{"orphan", 1, {}}};
    try {
        actions_selection(filtered, {}, {}, "A", 1);
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_EQ(e.code(), "E-NO-PLAN");
    }
}

TEST(MeasurePerformance, Examples) {
    std::vector<ActionInstance> one{{"only", "R", {}, 1}};
    EXPECT_EQ(measure_performance({}, {}, one, {}).action, "only");

    std::vector<ActionInstance> two{{"a", "R", {}, 1}, {"b", "R", {}, 1}};
    std::vector<ScoreEntry> table{{"a", {}, 0.2, {}}, {"b", {}, 0.9, {}}};
    EXPECT_EQ(measure_performance({}, {}, two, table).action, "b");

    std::vector<ActionInstance> tied{{"b", "R", {}, 1}, {"a", "R", {}, 1}};
    std::vector<ScoreEntry> even{{"a", {}, 0.5, {}}, {"b", {}, 0.5, {}}};
    EXPECT_EQ(measure_performance({}, {}, tied, even).action, "a");
}

TEST(MeasurePerformance, ConditionsReadPerceptsAndBeliefs) {
    std::vector<ActionInstance> two{{"a", "R", {}, 1}, {"b", "R", {}, 1}};
    std::vector<ScoreEntry> table{{"a", when_eq("light", Value::symbol("red")), 0.9, {}}, {"b", {}, 0.4, {}}};
    EXPECT_EQ(measure_performance({}, {}, two, table).action, "b");
    std::vector<Percept> red{{"Env", "light", Value::symbol("red"), 1}};
    EXPECT_EQ(measure_performance(red, {}, two, table).action, "a");
    BeliefSet believed{{"light", {"light", Value::symbol("red"), 0, BeliefOrigin::Initial}}};
    EXPECT_EQ(measure_performance({}, believed, two, table).action, "a");
}

TEST(MeasurePerformance, EmptyCandidates) {
    try {
        measure_performance({}, {}, {}, {});
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_EQ(e.code(), "E-NO-CANDIDATE");
    }
}

namespace {

const char* kGoals = R"(model G
environment E {
  deterministic: true
  static: true
  continuous: false
  state heat: int = 0
  perception heat: int
}
agent C: adaptive {
  perception heat: int
  representation heat
  knowledge {
    limit = 5
  }
  goal cool priority 2 when heat > 3 => fan()
  goal idle priority 1 => rest()
}
action fan by C () {
  heat := heat - 1
}
action rest by C () {
}
)";

}  // namespace

TEST(Decide, NoGuardHoldsMeansNoAction) {
    ModelSpec m = model_of(R"(model N
environment E {
  deterministic: true
  static: true
  continuous: false
  state heat: int = 0
  perception heat: int
}
agent C: cognitive {
  perception heat: int
  goal cool priority 2 when heat > 3 => fan()
}
action fan by C () {
  heat := heat - 1
}
)");
    const AgentSpec& spec = *m.find_agent("C");
    auto r = decide(spec, initial_cognition(spec), {}, {}, 1);
    EXPECT_TRUE(r.actions.empty());
}

TEST(Decide, BestHoldingGoalFires) {
    ModelSpec m = model_of(kGoals);
    const AgentSpec& spec = *m.find_agent("C");
    CognitionState st = initial_cognition(spec);
    auto calm = decide(spec, st, {}, std::vector<Percept>{{"E", "heat", Value::integer(1), 1}}, 1);
    ASSERT_EQ(calm.actions.size(), 1u);
    EXPECT_EQ(calm.actions[0].action, "rest");
    auto hot = decide(spec, st, {}, std::vector<Percept>{{"E", "heat", Value::integer(9), 1}}, 1);
    ASSERT_EQ(hot.actions.size(), 1u);
    EXPECT_EQ(hot.actions[0].action, "fan");
}

TEST(Decide, IntentionalEqualsStagedPipeline) {
    ModelSpec m = model_of(R"(model S
environment E {
  deterministic: true
  static: true
  continuous: false
  state s: int = 0
  perception s: int
}
agent I: intentional {
  perception s: int
  beliefs {
    s = 0
  }
  desire a priority 5 when s > 1 conflicts c
  desire b priority 3 when true
  desire c priority 4 when true
  intention a plan [x()]
  intention b plan [y(), x()]
  intention c plan [y()]
}
action x by I () {
  s := s + 1
}
action y by I () {
}
)");
    const AgentSpec& spec = *m.find_agent("I");
    CognitionState st = initial_cognition(spec);
    std::vector<Percept> ps{{"E", "s", Value::integer(3), 1}};
    auto fused = decide(spec, st, {}, ps, 1);

    auto revised = revise_beliefs(ps, st.beliefs, st.knowledge);
    auto desires = generate_desires(revised.beliefs, st.intentions, st.desire_rules);
    auto kept = filter_desires(desires, st.intentions);
    auto staged = actions_selection(kept, st.intentions, st.plans, "I", 1);
    EXPECT_EQ(fused.actions, staged.actions);
    EXPECT_EQ(fused.state.intentions, staged.intentions);
    EXPECT_EQ(fused.state.beliefs, revised.beliefs);
}

TEST(Communicate, NoRepresentationsNoMessages) {
    ModelSpec m = model_of(R"(model C0
environment E {
  deterministic: true
  static: true
  continuous: false
}
agent S: communicative {
}
agent T: reactive {
}
interaction S <-> T allows inform
)");
    MessageBus bus(m.interactions, {"S", "T"});
    const AgentSpec& spec = *m.find_agent("S");
    EXPECT_TRUE(communicate(spec, initial_cognition(spec), bus).empty());
}

TEST(Communicate, FactsTimesPeersInOrder) {
    ModelSpec m = model_of(R"(model C1
environment E {
  deterministic: true
  static: true
  continuous: false
}
agent S: communicative {
  representation beta
  representation alpha
}
agent Z: reactive {
}
agent X: reactive {
}
agent Y: reactive {
}
interaction S <-> Z allows inform
interaction X <-> S allows inform
interaction S <-> Y allows inform
)");
    MessageBus bus(m.interactions, {"S", "X", "Y", "Z"});
    const AgentSpec& spec = *m.find_agent("S");
    CognitionState st = initial_cognition(spec);
    st.representations["alpha"] = {Value::integer(1), "S"};
    st.representations["beta"] = {Value::integer(2), "S"};
    auto msgs = communicate(spec, st, bus);
    std::vector<std::string> got;
    for (const auto& msg : msgs) got.push_back(msg.key + ">" + msg.receiver);
    EXPECT_EQ(got, (std::vector<std::string>{"alpha>X", "alpha>Y", "alpha>Z", "beta>X", "beta>Y", "beta>Z"}));
}

TEST(Communicate, RelaysWithoutEchoOnALine) {
    ModelSpec m = model_of(R"(model Line
environment E {
  deterministic: true
  static: true
  continuous: false
}
agent A: reactive {
}
agent B: communicative {
  representation news
}
agent C: reactive {
}
interaction A <-> B allows inform
interaction B <-> C allows inform
)");
    MessageBus bus(m.interactions, {"A", "B", "C"});
    const AgentSpec& spec = *m.find_agent("B");
    CognitionState st = initial_cognition(spec);
    absorb_representations(st, spec, std::vector<Percept>{{"A", "news", Value::symbol("rain"), 1}});
    auto msgs = communicate(spec, st, bus);
    // Oracle: every linked peer except the fact's origin.
    std::vector<std::string> expected;
    for (const auto& peer : bus.peers("B", Performative::Inform)) {
        if (peer != st.representations.at("news").origin) expected.push_back(peer);
    }
    std::vector<std::string> got;
    for (const auto& msg : msgs) got.push_back(msg.receiver);
    EXPECT_EQ(got, expected);
    EXPECT_EQ(got, std::vector<std::string>{"C"});
}

TEST(ChangeInformation, EmptyEventIsIdentity) {
    ModelSpec m = model_of(kGoals);
    CognitionState st = initial_cognition(*m.find_agent("C"));
    EXPECT_EQ(change_information(st, {}), st);
}

TEST(ChangeInformation, RaisedPriorityChangesDecision) {
    ModelSpec m = model_of(kGoals);
    const AgentSpec& spec = *m.find_agent("C");
    CognitionState st = initial_cognition(spec);
    std::vector<Percept> hot{{"E", "heat", Value::integer(9), 1}};
    EXPECT_EQ(decide(spec, st, {}, hot, 1).actions.at(0).action, "fan");
    ChangeEvent raise;
    raise.priorities["idle"] = 7;
    CognitionState changed = change_information(st, raise);
    EXPECT_EQ(decide(spec, changed, {}, hot, 1).actions.at(0).action, "rest");
}

TEST(ChangeInformation, UnknownKeyIsAtomic) {
    ModelSpec m = model_of(kGoals);
    CognitionState st = initial_cognition(*m.find_agent("C"));
    ChangeEvent bad;
    bad.knowledge["limit"] = Value::integer(8);
    bad.knowledge["ghost"] = Value::integer(1);
    try {
        change_information(st, bad);
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_EQ(e.code(), "E-UNKNOWN-KEY");
    }
    EXPECT_EQ(st.knowledge.at("limit"), Value::integer(5));
    ChangeEvent good;
    good.knowledge["limit"] = Value::integer(8);
    EXPECT_EQ(change_information(st, good).knowledge.at("limit"), Value::integer(8));
}
