#include <gtest/gtest.h>

#include "masforge/modelc/compile.hpp"
#include "masforge/modelc/syntax.hpp"
#include "testkit.hpp"

using namespace masforge;

namespace {

ParseResult parse_text(std::string text) {
    return parse(SourceText::from_string("t.mas", std::move(text)));
}

const Diagnostic* first(const ValidationReport& r, const std::string& code) {
    for (const auto& d : r.diagnostics) {
        if (d.code == code) return &d;
    }
    return nullptr;
}

}  // namespace

TEST(SourceText, LocatesOffsets) {
    SourceText s = SourceText::from_string("f", "ab\ncd\n");
    EXPECT_EQ(s.locate(0).line, 1);
    EXPECT_EQ(s.locate(4).line, 2);
    EXPECT_EQ(s.locate(4).column, 2);
    EXPECT_EQ(s.line(2), "cd");
}

TEST(Lex, DottedIdentifiersAndComments) {
    auto r = lex(SourceText::from_string("f", "self.x := 1 # note\n\"a b\""));
    ASSERT_TRUE(r.report.passes());
    ASSERT_GE(r.tokens.size(), 5u);
    EXPECT_EQ(r.tokens[0].text, "self.x");
    EXPECT_EQ(r.tokens[3].kind, TokenKind::String);
    EXPECT_EQ(r.tokens[3].text, "a b");
    EXPECT_EQ(r.tokens.back().kind, TokenKind::End);
}

TEST(Lex, StrayCharacterIsReported) {
    auto r = lex(SourceText::from_string("f", "model M $"));
    EXPECT_TRUE(r.report.has("E-LEX"));
}

TEST(Parse, MinimalModel) {
    auto r = parse_text("model M  environment E { deterministic: true static: true continuous: false }");
    EXPECT_TRUE(r.report.passes());
    EXPECT_EQ(r.ast.model_name, "M");
    EXPECT_EQ(r.ast.environments.size(), 1u);
    EXPECT_TRUE(r.ast.agents.empty());
}

TEST(Parse, ChatModelHasThreeAgents) {
    auto r = parse_text(testkit::read_text(testkit::models_dir() / "chat.mas"));
    EXPECT_TRUE(r.report.passes());
    EXPECT_EQ(r.ast.agents.size(), 3u);
}

TEST(Parse, MissingBraceReportedAtOpeningBrace) {
    auto r = parse_text("model M\nenvironment E { deterministic: true static: true continuous: false }\n"
                        "agent A: reactive {\n  role r\n");
    const Diagnostic* d = first(r.report, "E-UNCLOSED");
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->loc.line, 3);
}

TEST(Parse, RecoversAndReportsSeveralErrors) {
    auto r = parse_text(R"(model M
environment E {
  deterministic: true
  static: true
  continuous: false
}
agent A: reactive {
  perception p: int from nowhere
  attribute a: int = 1
}
agent B: reactive {
  role 42
}
agent C: reactive {
  role fine
}
)");
    EXPECT_GE(r.report.error_count(), 2u);
    ASSERT_EQ(r.ast.agents.size(), 3u);
    EXPECT_EQ(r.ast.agents[0].spec.attributes.size(), 1u);
    EXPECT_EQ(r.ast.agents[2].spec.roles.size(), 1u);
}

TEST(Parse, SyntaxMessageNamesTheUnexpectedToken) {
    auto r = parse_text("model M\nenvironment E { deterministic: maybe static: true continuous: false }\n");
    const Diagnostic* d = first(r.report, "E-SYNTAX");
    ASSERT_NE(d, nullptr);
    EXPECT_NE(d->message.find("maybe"), std::string::npos);
    EXPECT_EQ(d->loc.line, 2);
}

TEST(Parse, NeverThrowsOnTruncations) {
    std::string text = testkit::read_text(testkit::models_dir() / "delivery.mas");
    for (std::size_t cut = 0; cut < text.size(); cut += 7) {
        EXPECT_NO_THROW(compile(SourceText::from_string("t", text.substr(0, cut))));
    }
}

TEST(Lower, DuplicateAgentCarriesBothLocations) {
    auto r = compile(SourceText::from_string("t", "model M\nenvironment E { deterministic: true static: true "
                                                  "continuous: false }\nagent A: reactive { }\n"
                                                  "agent A: cognitive { }\n"));
    const Diagnostic* d = first(r.report, "E-DUP-NAME");
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->loc.line, 4);
    EXPECT_EQ(d->related.line, 3);
}

TEST(Lower, ChatModelValidates) {
    auto r = compile(SourceText::from_string("chat", testkit::read_text(testkit::models_dir() / "chat.mas")));
    EXPECT_TRUE(r.parsed);
    EXPECT_TRUE(r.report.passes());
    EXPECT_EQ(r.model.name, "Chat");
}

TEST(Lower, InteractionWithUndeclaredAgent) {
    auto r = compile(SourceText::from_string("t", "model M\nenvironment E { deterministic: true static: true "
                                                  "continuous: false }\nagent A: reactive { }\n"
                                                  "interaction A <-> Ghost allows inform\n"));
    EXPECT_TRUE(r.report.has("E-UNRESOLVED-AGENT"));
}

TEST(Lower, MissingEnvironment) {
    auto r = compile(SourceText::from_string("t", "model M\nagent A: reactive { }\n"));
    EXPECT_TRUE(r.report.has("E-NO-ENVIRONMENT"));
}

TEST(Lower, IsTotalOnParsedInput) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        std::string text = testkit::random_model(seed);
        // Drop a random line; lowering must still answer with diagnostics.
        std::size_t at = text.find('\n', (seed * 131) % text.size());
        if (at != std::string::npos) {
            std::size_t end = text.find('\n', at + 1);
            text.erase(at, end == std::string::npos ? std::string::npos : end - at);
        }
        auto p = parse(SourceText::from_string("t", text));
        if (!p.report.passes()) continue;
        EXPECT_NO_THROW(lower(p.ast));
    }
}

TEST(Compile, SyntaxErrorsStopBeforeLowering) {
    auto r = compile(SourceText::from_string("t", "model M\nenvironment E { deterministic: true static: }\n"));
    EXPECT_FALSE(r.parsed);
    EXPECT_FALSE(r.report.passes());
}

TEST(Print, IsAFixedPointOnTheCorpus) {
    for (const auto& path : testkit::corpus()) {
        auto p1 = parse_text(testkit::read_text(path));
        ASSERT_TRUE(p1.report.passes()) << path;
        std::string once = print(p1.ast);
        auto p2 = parse_text(once);
        ASSERT_TRUE(p2.report.passes()) << path;
        EXPECT_EQ(p2.ast, p1.ast) << path;
        EXPECT_EQ(print(p2.ast), once) << path;
    }
}

TEST(Print, RoundTripsRandomModels) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto p1 = parse_text(testkit::random_model(seed));
        ASSERT_TRUE(p1.report.passes()) << seed;
        auto p2 = parse_text(print(p1.ast));
        ASSERT_TRUE(p2.report.passes()) << seed;
        EXPECT_EQ(p2.ast, p1.ast) << seed;
    }
}
