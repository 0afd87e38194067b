#include <gtest/gtest.h>

#include "testkit.hpp"

using namespace masforge;

namespace {

std::map<std::string, testkit::StampedValue> stamped(const BeliefSet& b) {
    std::map<std::string, testkit::StampedValue> out;
    for (const auto& [k, v] : b) out[k] = {v.value, v.tick};
    return out;
}

BeliefSet random_beliefs(std::mt19937_64& rng, std::size_t keys) {
    BeliefSet b;
    for (std::size_t i = 0; i < keys; ++i) {
        if (rng() % 2) continue;
        std::string k = "k" + std::to_string(i);
        b[k] = {k, Value::integer(rng() % 5), rng() % 6, BeliefOrigin::Initial};
    }
    return b;
}

KnowledgeBase random_kb(std::mt19937_64& rng, std::size_t keys) {
    KnowledgeBase kb;
    for (std::size_t i = 0; i < keys; ++i) {
        if (rng() % 4 == 0) kb["k" + std::to_string(i)] = Value::integer(0);
    }
    return kb;
}

}  // namespace

TEST(BeliefProperty, MatchesLastWriterWins) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        auto beliefs = random_beliefs(rng, 5);
        auto kb = random_kb(rng, 5);
        auto percepts = testkit::random_percepts(rng, 5, rng() % 20, 10);
        auto got = revise_beliefs(percepts, beliefs, kb).beliefs;
        ASSERT_EQ(stamped(got), testkit::last_writer_wins(stamped(beliefs), percepts, kb)) << i;
    }
}

TEST(BeliefProperty, ReapplyingIsANoOp) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 500; ++i) {
        auto beliefs = random_beliefs(rng, 4);
        auto percepts = testkit::random_percepts(rng, 4, 12, 8);
        auto once = revise_beliefs(percepts, beliefs, {}).beliefs;
        auto twice = revise_beliefs(percepts, once, {}).beliefs;
        EXPECT_EQ(stamped(twice), stamped(once));
    }
}

TEST(BeliefProperty, SplittingTheBatchChangesNothing) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 500; ++i) {
        auto beliefs = random_beliefs(rng, 4);
        auto kb = random_kb(rng, 4);
        auto percepts = testkit::random_percepts(rng, 4, 16, 8);
        std::size_t cut = rng() % (percepts.size() + 1);
        std::vector<Percept> head(percepts.begin(), percepts.begin() + static_cast<long>(cut));
        std::vector<Percept> tail(percepts.begin() + static_cast<long>(cut), percepts.end());
        auto staged = revise_beliefs(tail, revise_beliefs(head, beliefs, kb).beliefs, kb).beliefs;
        EXPECT_EQ(staged, revise_beliefs(percepts, beliefs, kb).beliefs);
    }
}

TEST(BeliefProperty, KnowledgeKeysNeverMove) {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 500; ++i) {
        auto beliefs = random_beliefs(rng, 5);
        auto kb = random_kb(rng, 5);
        auto percepts = testkit::random_percepts(rng, 5, 20, 10);
        auto got = revise_beliefs(percepts, beliefs, kb).beliefs;
        for (const auto& [k, v] : kb) {
            auto before = beliefs.find(k);
            auto after = got.find(k);
            if (before == beliefs.end()) {
                EXPECT_EQ(after, got.end());
            } else {
                EXPECT_EQ(after->second, before->second);
            }
        }
    }
}
