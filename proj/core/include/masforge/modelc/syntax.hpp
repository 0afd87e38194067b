#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "masforge/diagnostics.hpp"
#include "masforge/metamodel.hpp"

namespace masforge {

/// A model file held in memory with its line index.
struct SourceText {
    std::string path;
    std::string contents;
    std::vector<std::size_t> line_starts;

    static SourceText from_string(std::string path, std::string contents);
    /// Throws std::runtime_error naming the path when the file cannot be read.
    static SourceText load(const std::string& path);

    /// 1-based location of a byte offset.
    SourceLoc locate(std::size_t offset) const;
    std::string_view line(int number) const;
};

enum class TokenKind { Ident, Int, Real, String, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // identifier, punctuation, unescaped string or number text
    SourceLoc loc;
};

struct LexResult {
    std::vector<Token> tokens;  // always ends with an End token
    ValidationReport report;
};

/// Identifiers may contain '.', so `self.x` is a single token.
LexResult lex(const SourceText& source);

/// An agent block before its kind word is resolved.
struct AgentDecl {
    std::string kind_word;
    SourceLoc kind_loc;
    AgentSpec spec;

    bool operator==(const AgentDecl&) const = default;
};

/// Parse tree. Spans live on each node; equality ignores them.
struct Ast {
    std::string model_name;
    SourceLoc model_loc;
    std::vector<EnvironmentSpec> environments;
    std::vector<AgentDecl> agents;
    std::vector<ActionSpec> actions;
    std::vector<InteractionSpec> interactions;

    bool operator==(const Ast&) const = default;
};

struct ParseResult {
    Ast ast;
    ValidationReport report;
};

/// Never stops at the first error: a bad member or block is reported and
/// skipped up to the next block boundary.
ParseResult parse(const SourceText& source);

/// Canonical formatter. Parsing the output yields an equal Ast.
std::string print(const Ast& ast);

}  // namespace masforge
