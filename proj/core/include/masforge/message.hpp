#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "masforge/metamodel.hpp"

namespace masforge {

/// Interaction envelope. The payload fields in use depend on the
/// performative: Inform carries (key, value); GetInformation carries key;
/// InformAboutConstraints carries constraints; Reply carries (key, value)
/// or `known == false`.
struct Message {
    std::string sender;
    std::string receiver;
    Performative performative = Performative::Inform;
    std::string key;
    Value value;
    std::set<std::string> constraints;
    bool known = true;
    std::uint64_t conversation_id = 0;
    std::uint64_t sent_tick = 0;
    std::uint64_t sequence = 0;

    bool operator==(const Message&) const = default;
};

class InteractionError : public std::runtime_error {
public:
    InteractionError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// In-process synchronous bus. Messages sent during tick t become due at
/// t + 1 and are handed out ordered by (sender name, send order).
class MessageBus {
public:
    MessageBus(std::vector<InteractionSpec> interactions, std::vector<std::string> agents);

    void set_tick(std::uint64_t tick) { tick_ = tick; }
    std::uint64_t tick() const { return tick_; }

    bool registered(const std::string& agent) const;
    bool permits(const std::string& a, const std::string& b, Performative p) const;
    /// Agents `agent` may address with `p`, ascending.
    std::vector<std::string> peers(const std::string& agent, Performative p) const;

    Message inform(const std::string& sender, const std::string& receiver, std::string key, Value value);
    /// Returns the conversation id the eventual Reply will carry.
    std::uint64_t get_information(const std::string& sender, const std::string& receiver, std::string key);
    /// As get_information, returning the enqueued query itself.
    Message query(const std::string& sender, const std::string& receiver, std::string key);
    Message inform_about_constraints(const std::string& sender, const std::string& receiver,
                                     std::set<std::string> constraints);
    Message accept_partnership(const std::string& sender, const std::string& receiver);
    /// Answers an outstanding GetInformation; `value` empty means not-known.
    Message reply(const Message& query, std::optional<Value> value);

    /// Removes and returns every message due at `tick`.
    std::vector<Message> collect_due(std::uint64_t tick);

    std::size_t pending() const { return queue_.size(); }
    std::size_t outstanding_queries() const { return outstanding_.size(); }
    bool is_outstanding(std::uint64_t conversation_id) const { return outstanding_.count(conversation_id) > 0; }

private:
    Message& enqueue(Message m, bool check_permission);

    std::vector<InteractionSpec> interactions_;
    std::set<std::string> agents_;
    std::vector<Message> queue_;
    std::map<std::uint64_t, std::pair<std::string, std::string>> outstanding_;  // id -> (asker, responder)
    std::uint64_t tick_ = 0;
    std::uint64_t next_sequence_ = 1;
    std::uint64_t next_conversation_ = 1;
};

}  // namespace masforge
