#include "masforge/chat.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace masforge {

std::string_view to_string(ChatEventKind kind) {
    switch (kind) {
    case ChatEventKind::DeclareReceiver: return "declare";
    case ChatEventKind::UserSend: return "say";
    case ChatEventKind::UserClear: return "clear";
    }
    return "?";
}

std::string_view to_string(ChatArea area) {
    return area == ChatArea::Sent ? "sent" : "received";
}

std::string serialize(const Transcript& transcript) {
    std::string out;
    for (const auto& r : transcript.records) {
        nlohmann::json j;
        j["tick"] = r.tick;
        j["agent"] = r.agent;
        j["area"] = std::string(to_string(r.area));
        j["event"] = r.cleared ? "cleared" : "message";
        if (!r.cleared) {
            j["peer"] = r.peer;
            j["text"] = r.text;
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::optional<std::string> chat_incompatibility(const ModelSpec& model) {
    if (model.agents.empty()) return "model has no agents";
    for (const auto& a : model.agents) {
        for (auto name : {kDeclarePercept, kSayPercept, kClearPercept}) {
            const PerceptDecl* p = a.find_perception(name);
            if (p == nullptr || p->kind != ValueKind::Symbol) {
                return "agent '" + a.name + "' lacks the symbol perception '" + std::string(name) + "'";
            }
        }
    }
    return std::nullopt;
}

namespace {

struct Word {
    std::string text;
    std::size_t at;
};

std::vector<Word> words_of(std::string_view line) {
    std::vector<Word> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back({std::string(line.substr(start, i - start)), start});
    }
    return out;
}

// Text from word `first` to the end of the line, inner spacing kept.
std::string rest_of(std::string_view line, const std::vector<Word>& words, std::size_t first) {
    if (first >= words.size()) return "";
    std::size_t begin = words[first].at;
    std::size_t end = words.back().at + words.back().text.size();
    return std::string(line.substr(begin, end - begin));
}

bool event_order(const ChatEvent& a, const ChatEvent& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    return a.agent < b.agent;
}

}  // namespace

ChatScript parse_chat_script(std::string_view text, const ModelSpec& model) {
    ChatScript out;
    std::map<std::pair<std::uint64_t, std::string>, SourceLoc> taken;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        auto words = words_of(line);
        if (words.empty() || words[0].text[0] == '#') continue;
        auto at = [&](std::size_t w) { return SourceLoc{line_no, static_cast<int>(words[w].at) + 1}; };

        if (words.size() < 3) {
            out.report.error("E-SCRIPT", "expected '<tick> <agent> declare|say|clear ...'", at(0));
            continue;
        }
        ChatEvent e;
        e.loc = at(0);
        const std::string& t = words[0].text;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), e.tick);
        if (ec != std::errc{} || p != t.data() + t.size() || e.tick == 0) {
            out.report.error("E-SCRIPT", "tick must be a positive integer, got '" + t + "'", at(0));
            continue;
        }
        e.agent = words[1].text;
        if (model.find_agent(e.agent) == nullptr) {
            out.report.error("E-UNKNOWN-AGENT", "no agent named '" + e.agent + "'", at(1));
            continue;
        }
        const std::string& verb = words[2].text;
        if (verb == kDeclarePercept) {
            e.kind = ChatEventKind::DeclareReceiver;
            if (words.size() != 4) {
                out.report.error("E-SCRIPT", "declare takes exactly one receiver", at(2));
                continue;
            }
            e.receiver = words[3].text;
            if (model.find_agent(e.receiver) == nullptr) {
                out.report.error("E-UNKNOWN-AGENT", "no agent named '" + e.receiver + "'", at(3));
                continue;
            }
            if (e.receiver == e.agent) {
                out.report.error("E-SELF-RECEIVER", "'" + e.agent + "' cannot declare itself as receiver", at(3));
                continue;
            }
            if (!model.permits(e.agent, e.receiver, Performative::Inform)) {
                out.report.error("E-NO-INTERACTION",
                                 "no interaction lets '" + e.agent + "' inform '" + e.receiver + "'", at(3));
                continue;
            }
        } else if (verb == kSayPercept) {
            e.kind = ChatEventKind::UserSend;
            e.text = rest_of(line, words, 3);
            if (e.text.empty()) {
                out.report.error("E-SCRIPT", "say needs a message text", at(2));
                continue;
            }
        } else if (verb == kClearPercept) {
            e.kind = ChatEventKind::UserClear;
            if (words.size() != 3) {
                out.report.error("E-SCRIPT", "clear takes no argument", at(3));
                continue;
            }
        } else {
            out.report.error("E-SCRIPT", "unknown chat verb '" + verb + "'", at(2));
            continue;
        }
        auto [it, fresh] = taken.emplace(std::pair(e.tick, e.agent), e.loc);
        if (!fresh) {
            out.report.error("E-DUP-EVENT",
                             "'" + e.agent + "' already has an event at tick " + std::to_string(e.tick), e.loc,
                             it->second);
            continue;
        }
        out.events.push_back(std::move(e));
    }
    std::stable_sort(out.events.begin(), out.events.end(), event_order);
    return out;
}

Stimulus to_stimulus(const ChatEvent& event) {
    switch (event.kind) {
    case ChatEventKind::DeclareReceiver:
        return {event.tick, event.agent, std::string(kDeclarePercept), Value::symbol(event.receiver), event.loc};
    case ChatEventKind::UserSend:
        return {event.tick, event.agent, std::string(kSayPercept), Value::symbol(event.text), event.loc};
    case ChatEventKind::UserClear: break;
    }
    return {event.tick, event.agent, std::string(kClearPercept), Value::symbol(""), event.loc};
}

ChatState initial_chat_state(const ModelSpec& model) {
    ChatState state;
    for (const auto& a : model.agents) state.agents[a.name];
    return state;
}

void begin_tick(ChatState& state, std::uint64_t tick) {
    state.tick = tick;
    std::stable_sort(state.in_flight.begin(), state.in_flight.end(),
                     [](const InFlight& a, const InFlight& b) { return a.from < b.from; });
    for (const auto& m : state.in_flight) {
        state.agents[m.to].received.push_back({m.from, m.text});
        state.transcript.records.push_back({tick, m.to, ChatArea::Received, false, m.from, m.text});
    }
    state.in_flight.clear();
}

ChatState apply_chat_event(ChatState state, const ChatEvent& event) {
    auto self = state.agents.find(event.agent);
    if (self == state.agents.end()) throw ModelError("E-UNKNOWN-AGENT", "no agent named '" + event.agent + "'");
    ChatAgentState& me = self->second;
    switch (event.kind) {
    case ChatEventKind::DeclareReceiver:
        if (!state.agents.count(event.receiver)) {
            throw ModelError("E-UNKNOWN-AGENT", "no agent named '" + event.receiver + "'");
        }
        me.receiver = event.receiver;
        break;
    case ChatEventKind::UserSend:
        if (!me.receiver) {
            state.notes.push_back("tick " + std::to_string(state.tick) + ": " + event.agent +
                                  " has no receiver; held \"" + event.text + "\"");
            break;
        }
        me.sent.push_back({*me.receiver, event.text});
        state.in_flight.push_back({event.agent, *me.receiver, event.text});
        state.transcript.records.push_back({state.tick, event.agent, ChatArea::Sent, false, *me.receiver, event.text});
        break;
    case ChatEventKind::UserClear:
        me.sent.clear();
        me.received.clear();
        state.transcript.records.push_back({state.tick, event.agent, ChatArea::Sent, true, "", ""});
        state.transcript.records.push_back({state.tick, event.agent, ChatArea::Received, true, "", ""});
        break;
    }
    return state;
}

Transcript reference_transcript(const ModelSpec& model, std::span<const ChatEvent> events) {
    std::vector<ChatEvent> ordered(events.begin(), events.end());
    std::stable_sort(ordered.begin(), ordered.end(), event_order);
    ChatState state = initial_chat_state(model);
    std::uint64_t last = ordered.empty() ? 0 : ordered.back().tick + 1;
    std::size_t next = 0;
    for (std::uint64_t tick = 1; tick <= last; ++tick) {
        begin_tick(state, tick);
        while (next < ordered.size() && ordered[next].tick == tick) state = apply_chat_event(std::move(state), ordered[next++]);
    }
    return state.transcript;
}

Transcript project_transcript(const Trace& trace) {
    Transcript t;
    for (const auto& r : trace.records) {
        for (const auto& m : r.delivered) {
            if (m.performative != Performative::Inform) continue;
            t.records.push_back({r.tick, m.receiver, ChatArea::Received, false, m.sender, m.value.display()});
        }
        std::set<std::string> actors;
        for (const auto& a : r.actions) actors.insert(a.actor);
        for (const auto& m : r.sent) actors.insert(m.sender);
        for (const auto& actor : actors) {
            for (const auto& a : r.actions) {
                if (a.actor != actor || !a.action.ends_with(kClearSuffix)) continue;
                t.records.push_back({r.tick, actor, ChatArea::Sent, true, "", ""});
                t.records.push_back({r.tick, actor, ChatArea::Received, true, "", ""});
            }
            for (const auto& m : r.sent) {
                if (m.sender != actor || m.performative != Performative::Inform) continue;
                t.records.push_back({r.tick, actor, ChatArea::Sent, false, m.receiver, m.value.display()});
            }
        }
    }
    return t;
}

ChatRun run_chat_script(const ModelSpec& model, std::span<const ChatEvent> events, std::uint64_t seed) {
    EpisodeConfig config;
    config.seed = seed;
    config.ticks = 0;
    for (const auto& e : events) {
        config.stimuli.push_back(to_stimulus(e));
        config.ticks = std::max(config.ticks, e.tick + 1);
    }
    ChatRun run;
    run.trace = run_episode(model, config);
    run.transcript = project_transcript(run.trace);
    return run;
}

std::map<std::string, ChatAgentState> areas(const Transcript& transcript) {
    std::map<std::string, ChatAgentState> out;
    for (const auto& r : transcript.records) {
        auto& area = r.area == ChatArea::Sent ? out[r.agent].sent : out[r.agent].received;
        if (r.cleared) {
            area.clear();
        } else {
            area.push_back({r.peer, r.text});
        }
    }
    return out;
}

namespace {

void render_areas(std::ostream& out, const ModelSpec& model, const Transcript& transcript, std::uint64_t tick) {
    auto state = areas(transcript);
    out << "-- tick " << tick << '\n';
    auto list = [&](const std::vector<ChatLine>& lines, const char* arrow) {
        if (lines.empty()) return std::string("(empty)");
        std::string s;
        for (const auto& l : lines) {
            if (!s.empty()) s += "; ";
            s += std::string(arrow) + l.peer + ": " + l.text;
        }
        return s;
    };
    for (const auto& a : model.agents) {
        const auto& st = state[a.name];
        out << "  " << a.name << "  sent: " << list(st.sent, "to ") << "  received: " << list(st.received, "from ")
            << '\n';
    }
}

}  // namespace

ChatRun run_chat_interactive(const ModelSpec& model, std::istream& in, std::ostream& out, std::uint64_t seed) {
    EpisodeConfig config;
    config.seed = seed;
    Simulation sim(model, config);
    std::string user = model.agents.empty() ? "" : model.agents.front().name;
    out << "chat: typing as " << user << " (commands: as, to, say, clear, wait, quit)\n";

    auto step = [&](std::optional<ChatEvent> event) {
        std::vector<Stimulus> injected;
        if (event) {
            event->tick = sim.tick() + 1;
            injected.push_back(to_stimulus(*event));
        }
        const TickRecord& rec = sim.step(injected);
        for (const auto& n : rec.notes) out << "  note " << n << '\n';
        render_areas(out, model, project_transcript(sim.trace()), rec.tick);
    };

    for (std::string line; std::getline(in, line);) {
        auto words = words_of(line);
        if (words.empty()) continue;
        const std::string& cmd = words[0].text;
        if (cmd == "quit") break;
        if (cmd == "as") {
            if (words.size() != 2 || model.find_agent(words[1].text) == nullptr) {
                out << "error: 'as' needs a known agent name\n";
                continue;
            }
            user = words[1].text;
            out << "chat: typing as " << user << '\n';
        } else if (cmd == "to") {
            if (words.size() != 2 || model.find_agent(words[1].text) == nullptr) {
                out << "error: 'to' needs a known agent name\n";
                continue;
            }
            if (words[1].text == user) {
                out << "error: " << user << " cannot address itself\n";
                continue;
            }
            step(ChatEvent{ChatEventKind::DeclareReceiver, 0, user, words[1].text, "", {}});
        } else if (cmd == "say") {
            std::string text = rest_of(line, words, 1);
            if (text.empty()) {
                out << "error: 'say' needs a message\n";
                continue;
            }
            step(ChatEvent{ChatEventKind::UserSend, 0, user, "", text, {}});
        } else if (cmd == "clear") {
            step(ChatEvent{ChatEventKind::UserClear, 0, user, "", "", {}});
        } else if (cmd == "wait") {
            step(std::nullopt);
        } else {
            out << "error: unknown command '" << cmd << "'\n";
        }
    }
    if (sim.society().bus().pending() > 0) step(std::nullopt);

    ChatRun run;
    run.trace = sim.trace();
    run.transcript = project_transcript(run.trace);
    return run;
}

}  // namespace masforge
