#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "masforge/runtime.hpp"

namespace masforge {

enum class ChatEventKind { DeclareReceiver, UserSend, UserClear };
std::string_view to_string(ChatEventKind kind);

/// What a user does at an agent's terminal during one tick.
struct ChatEvent {
    ChatEventKind kind = ChatEventKind::UserSend;
    std::uint64_t tick = 0;
    std::string agent;
    std::string receiver;  // DeclareReceiver
    std::string text;      // UserSend
    SourceLoc loc;

    bool operator==(const ChatEvent&) const = default;
};

/// Percept names the chat agents react to.
inline constexpr std::string_view kDeclarePercept = "declare";
inline constexpr std::string_view kSayPercept = "say";
inline constexpr std::string_view kClearPercept = "clear";
/// Actions whose name ends with this empty the actor's areas.
inline constexpr std::string_view kClearSuffix = "_clear";

enum class ChatArea { Sent, Received };
std::string_view to_string(ChatArea area);

/// One line of a transcript: a message entering an area, or an area being
/// cleared (`cleared == true`, no peer or text).
struct TranscriptRecord {
    std::uint64_t tick = 0;
    std::string agent;
    ChatArea area = ChatArea::Sent;
    bool cleared = false;
    std::string peer;
    std::string text;

    bool operator==(const TranscriptRecord&) const = default;
};

struct Transcript {
    std::vector<TranscriptRecord> records;

    bool operator==(const Transcript&) const = default;
};

/// One key-sorted JSON object per record.
std::string serialize(const Transcript& transcript);

/// Null when every agent declares the declare/say/clear perceptions;
/// otherwise a reason.
std::optional<std::string> chat_incompatibility(const ModelSpec& model);

struct ChatScript {
    std::vector<ChatEvent> events;  // sorted by (tick, agent)
    ValidationReport report;
};

/// `<tick> <agent> declare <receiver>`, `<tick> <agent> say <text...>`,
/// `<tick> <agent> clear`. Every problem is reported with its line.
ChatScript parse_chat_script(std::string_view text, const ModelSpec& model);

Stimulus to_stimulus(const ChatEvent& event);

// --- reference semantics ------------------------------------------------------

struct ChatLine {
    std::string peer;
    std::string text;
    bool operator==(const ChatLine&) const = default;
};

struct ChatAgentState {
    std::optional<std::string> receiver;
    std::vector<ChatLine> sent;
    std::vector<ChatLine> received;
    bool operator==(const ChatAgentState&) const = default;
};

struct InFlight {
    std::string from;
    std::string to;
    std::string text;
    bool operator==(const InFlight&) const = default;
};

/// Direct model of the chat rules, independent of the agent runtime.
struct ChatState {
    std::uint64_t tick = 0;
    std::map<std::string, ChatAgentState> agents;
    std::vector<InFlight> in_flight;
    Transcript transcript;
    std::vector<std::string> notes;
};

ChatState initial_chat_state(const ModelSpec& model);
/// Moves to `tick`, delivering everything sent before it (sender order).
void begin_tick(ChatState& state, std::uint64_t tick);
/// Throws ModelError("E-UNKNOWN-AGENT") when a declaration names an
/// unregistered agent.
ChatState apply_chat_event(ChatState state, const ChatEvent& event);
Transcript reference_transcript(const ModelSpec& model, std::span<const ChatEvent> events);

// --- runtime route ------------------------------------------------------------

/// Reads the chat view out of a runtime trace.
Transcript project_transcript(const Trace& trace);

struct ChatRun {
    Transcript transcript;
    Trace trace;
};

/// Replays the events through the agent runtime. Runs until one tick after
/// the last event so final messages arrive.
ChatRun run_chat_script(const ModelSpec& model, std::span<const ChatEvent> events, std::uint64_t seed = 0);

/// Terminal loop: `as <agent>` picks the typing user, `to <agent>`, `say
/// <text>`, `clear` and `wait` each take one tick, `quit` ends. Areas are
/// printed after every tick.
ChatRun run_chat_interactive(const ModelSpec& model, std::istream& in, std::ostream& out, std::uint64_t seed = 0);

/// Per-agent areas after folding a transcript.
std::map<std::string, ChatAgentState> areas(const Transcript& transcript);

}  // namespace masforge
