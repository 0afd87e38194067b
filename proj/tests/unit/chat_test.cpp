#include <gtest/gtest.h>

#include <sstream>

#include "masforge/chat.hpp"
#include "testkit.hpp"

using namespace masforge;

namespace {

const ModelSpec& chat() {
    static const ModelSpec m = testkit::load_model(testkit::models_dir() / "chat.mas");
    return m;
}

ChatEvent declare(std::uint64_t tick, std::string agent, std::string to) {
    return {ChatEventKind::DeclareReceiver, tick, std::move(agent), std::move(to), {}, {}};
}
ChatEvent say(std::uint64_t tick, std::string agent, std::string text) {
    return {ChatEventKind::UserSend, tick, std::move(agent), {}, std::move(text), {}};
}
ChatEvent clear(std::uint64_t tick, std::string agent) {
    return {ChatEventKind::UserClear, tick, std::move(agent), {}, {}, {}};
}

Transcript via_runtime(const std::vector<ChatEvent>& events, std::uint64_t seed = 0) {
    return run_chat_script(chat(), events, seed).transcript;
}

}  // namespace

TEST(Chat, ModelIsCompatible) {
    EXPECT_FALSE(chat_incompatibility(chat()).has_value());
    ModelSpec other = testkit::load_model(testkit::models_dir() / "delivery.mas");
    EXPECT_TRUE(chat_incompatibility(other).has_value());
}

TEST(Chat, SendAfterDeclareReachesPeerNextTick) {
    auto t = via_runtime({declare(1, "Alice", "Bob"), say(2, "Alice", "hi")});
    std::vector<TranscriptRecord> want{
        {2, "Alice", ChatArea::Sent, false, "Bob", "hi"},
        {3, "Bob", ChatArea::Received, false, "Alice", "hi"},
    };
    EXPECT_EQ(t.records, want);
}

TEST(Chat, SendBeforeDeclareGoesNowhere) {
    auto t = via_runtime({say(1, "Alice", "hello?")});
    EXPECT_TRUE(t.records.empty());
}

TEST(Chat, ClearEmptiesOnlyTheActor) {
    auto t = via_runtime({declare(1, "Alice", "Bob"), say(2, "Alice", "one"), clear(4, "Alice")});
    auto a = areas(t);
    EXPECT_TRUE(a["Alice"].sent.empty());
    EXPECT_TRUE(a["Alice"].received.empty());
    ASSERT_EQ(a["Bob"].received.size(), 1u);
    EXPECT_EQ(a["Bob"].received[0], (ChatLine{"Alice", "one"}));
}

TEST(Chat, ReceiverIsSticky) {
    auto t = via_runtime({declare(1, "Carol", "Bob"), say(2, "Carol", "a"), say(3, "Carol", "b")});
    auto a = areas(t);
    EXPECT_EQ(a["Bob"].received, (std::vector<ChatLine>{{"Carol", "a"}, {"Carol", "b"}}));
}

TEST(Chat, RedeclaringSwitchesPeer) {
    auto t = via_runtime({declare(1, "Bob", "Alice"), say(2, "Bob", "x"), declare(3, "Bob", "Carol"),
                          say(4, "Bob", "y")});
    auto a = areas(t);
    EXPECT_EQ(a["Alice"].received, (std::vector<ChatLine>{{"Bob", "x"}}));
    EXPECT_EQ(a["Carol"].received, (std::vector<ChatLine>{{"Bob", "y"}}));
    EXPECT_EQ(a["Bob"].sent, (std::vector<ChatLine>{{"Alice", "x"}, {"Carol", "y"}}));
}

TEST(Chat, SimultaneousSendsAreDeliveredInSenderOrder) {
    auto t = via_runtime({declare(1, "Bob", "Alice"), declare(1, "Carol", "Alice"), say(2, "Carol", "c"),
                          say(2, "Bob", "b")});
    auto a = areas(t);
    EXPECT_EQ(a["Alice"].received, (std::vector<ChatLine>{{"Bob", "b"}, {"Carol", "c"}}));
}

TEST(Chat, GoldenScript) {
    auto script = parse_chat_script(testkit::read_text(testkit::golden_dir() / "chat_s1.script"), chat());
    ASSERT_TRUE(script.report.passes());
    auto t = run_chat_script(chat(), script.events).transcript;
    EXPECT_EQ(serialize(t), testkit::read_text(testkit::golden_dir() / "chat_s1.transcript"));
}

TEST(Chat, ReferenceFoldAgreesWithRuntime) {
    auto script = parse_chat_script(testkit::read_text(testkit::golden_dir() / "chat_s1.script"), chat());
    EXPECT_EQ(reference_transcript(chat(), script.events), via_runtime(script.events));
}

TEST(Chat, SeedDoesNotMatter) {
    auto script = parse_chat_script(testkit::read_text(testkit::golden_dir() / "chat_s1.script"), chat());
    EXPECT_EQ(via_runtime(script.events, 1), via_runtime(script.events, 2));
}

TEST(Chat, ReferenceRejectsUnknownReceiver) {
    ChatState s = initial_chat_state(chat());
    begin_tick(s, 1);
    try {
        apply_chat_event(s, declare(1, "Alice", "Zed"));
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_EQ(e.code(), "E-UNKNOWN-AGENT");
    }
}

TEST(ChatScript, ReportsEveryProblem) {
    auto s = parse_chat_script("1 Alice declare Bob\n"
                               "x Alice say hi\n"
                               "2 Zed say hi\n"
                               "3 Alice declare Alice\n"
                               "4 Alice shout hi\n"
                               "1 Alice clear\n",
                               chat());
    EXPECT_TRUE(s.report.has("E-SCRIPT"));
    EXPECT_TRUE(s.report.has("E-UNKNOWN-AGENT"));
    EXPECT_TRUE(s.report.has("E-SELF-RECEIVER"));
    EXPECT_TRUE(s.report.has("E-DUP-EVENT"));
    EXPECT_EQ(s.report.error_count(), 5u);
}

TEST(ChatScript, SortsByTickThenAgent) {
    auto s = parse_chat_script("2 Bob clear\n1 Carol clear\n2 Alice clear\n", chat());
    ASSERT_TRUE(s.report.passes());
    ASSERT_EQ(s.events.size(), 3u);
    EXPECT_EQ(s.events[0].agent, "Carol");
    EXPECT_EQ(s.events[1].agent, "Alice");
    EXPECT_EQ(s.events[2].agent, "Bob");
}

TEST(ChatScript, SayKeepsTheWholeText) {
    auto s = parse_chat_script("1 Alice say  spaced   words here\n", chat());
    ASSERT_EQ(s.events.size(), 1u);
    EXPECT_EQ(s.events[0].text, "spaced   words here");
}

TEST(ChatInteractive, MatchesTheScriptedRun) {
    std::istringstream in("as Alice\nto Bob\nsay hi Bob\nas Bob\nto Alice\nsay hey\nclear\nquit\n");
    std::ostringstream out;
    ChatRun live = run_chat_interactive(chat(), in, out);
    auto scripted = via_runtime({declare(1, "Alice", "Bob"), say(2, "Alice", "hi Bob"), declare(3, "Bob", "Alice"),
                                 say(4, "Bob", "hey"), clear(5, "Bob")});
    EXPECT_EQ(live.transcript, scripted);
    EXPECT_NE(out.str().find("-- tick 1"), std::string::npos);
}
