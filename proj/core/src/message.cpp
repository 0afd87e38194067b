#include "masforge/message.hpp"

#include <algorithm>

namespace masforge {

MessageBus::MessageBus(std::vector<InteractionSpec> interactions, std::vector<std::string> agents)
    : interactions_(std::move(interactions)), agents_(agents.begin(), agents.end()) {}

bool MessageBus::registered(const std::string& agent) const {
    return agents_.count(agent) > 0;
}

bool MessageBus::permits(const std::string& a, const std::string& b, Performative p) const {
    return std::any_of(interactions_.begin(), interactions_.end(), [&](const InteractionSpec& i) {
        bool pair = (i.initiator == a && i.responder == b) || (i.initiator == b && i.responder == a);
        return pair && i.permits(p);
    });
}

std::vector<std::string> MessageBus::peers(const std::string& agent, Performative p) const {
    std::set<std::string> out;
    for (const auto& i : interactions_) {
        if (!i.permits(p)) continue;
        if (i.initiator == agent) out.insert(i.responder);
        if (i.responder == agent) out.insert(i.initiator);
    }
    return {out.begin(), out.end()};
}

Message& MessageBus::enqueue(Message m, bool check_permission) {
    if (!registered(m.receiver)) {
        throw InteractionError("E-UNKNOWN-AGENT", "message to unregistered agent '" + m.receiver + "'");
    }
    if (check_permission && !permits(m.sender, m.receiver, m.performative)) {
        throw InteractionError("E-NO-INTERACTION", "no interaction permits " + std::string(to_string(m.performative)) +
                                                       " from '" + m.sender + "' to '" + m.receiver + "'");
    }
    m.sent_tick = tick_;
    m.sequence = next_sequence_++;
    queue_.push_back(std::move(m));
    return queue_.back();
}

Message MessageBus::inform(const std::string& sender, const std::string& receiver, std::string key, Value value) {
    Message m;
    m.sender = sender;
    m.receiver = receiver;
    m.performative = Performative::Inform;
    m.key = std::move(key);
    m.value = std::move(value);
    return enqueue(std::move(m), true);
}

std::uint64_t MessageBus::get_information(const std::string& sender, const std::string& receiver, std::string key) {
    return query(sender, receiver, std::move(key)).conversation_id;
}

Message MessageBus::query(const std::string& sender, const std::string& receiver, std::string key) {
    Message m;
    m.sender = sender;
    m.receiver = receiver;
    m.performative = Performative::GetInformation;
    m.key = std::move(key);
    m.conversation_id = next_conversation_;
    Message sent = enqueue(std::move(m), true);
    outstanding_[next_conversation_++] = {sender, receiver};
    return sent;
}

Message MessageBus::inform_about_constraints(const std::string& sender, const std::string& receiver,
                                             std::set<std::string> constraints) {
    Message m;
    m.sender = sender;
    m.receiver = receiver;
    m.performative = Performative::InformAboutConstraints;
    m.constraints = std::move(constraints);
    return enqueue(std::move(m), true);
}

Message MessageBus::accept_partnership(const std::string& sender, const std::string& receiver) {
    Message m;
    m.sender = sender;
    m.receiver = receiver;
    m.performative = Performative::AcceptPartnership;
    return enqueue(std::move(m), true);
}

Message MessageBus::reply(const Message& query, std::optional<Value> value) {
    auto it = outstanding_.find(query.conversation_id);
    if (query.performative != Performative::GetInformation || it == outstanding_.end() ||
        it->second.first != query.sender || it->second.second != query.receiver) {
        throw InteractionError("E-ORPHAN-REPLY",
                               "no outstanding query with conversation " + std::to_string(query.conversation_id));
    }
    outstanding_.erase(it);
    Message m;
    m.sender = query.receiver;
    m.receiver = query.sender;
    m.performative = Performative::Reply;
    m.key = query.key;
    m.conversation_id = query.conversation_id;
    m.known = value.has_value();
    if (value) m.value = std::move(*value);
    // The query already passed the interaction check; answering needs no second one.
    return enqueue(std::move(m), false);
}

std::vector<Message> MessageBus::collect_due(std::uint64_t tick) {
    std::vector<Message> due;
    std::vector<Message> later;
    for (auto& m : queue_) {
        (m.sent_tick < tick ? due : later).push_back(std::move(m));
    }
    queue_ = std::move(later);
    std::sort(due.begin(), due.end(), [](const Message& a, const Message& b) {
        if (a.sender != b.sender) return a.sender < b.sender;
        return a.sequence < b.sequence;
    });
    return due;
}

}  // namespace masforge
