#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "masforge/value.hpp"

namespace masforge {

/// 1-based line/column of a construct in a model file. Locations never take
/// part in structural equality: two models that differ only in layout compare
/// equal.
struct SourceLoc {
    int line = 0;
    int column = 0;

    bool known() const { return line > 0; }
    friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

std::string to_string(const SourceLoc& loc);

/// Deterministic random stream for non-deterministic environments. The
/// engine and the bounded draw are both fully specified, so a given
/// (seed, tick, phase) yields the same draws on every platform.
class SeededStream {
public:
    SeededStream(std::uint64_t seed, std::uint64_t tick, std::uint64_t phase);

    std::uint64_t next() { return engine_(); }
    /// Uniform index in [0, n); n must be positive.
    std::size_t below(std::size_t n);

private:
    std::mt19937_64 engine_;
};

enum class ExprOp { Literal, Ref, Neg, Add, Sub, Mul, Div, OneOf };

/// Arithmetic expression used by effects, drift rules and action arguments.
/// `one_of(a, b, ...)` is a seeded uniform choice among alternatives.
struct Expr {
    ExprOp op = ExprOp::Literal;
    Value literal;
    std::string name;  // Ref target: `x` or `self.x`
    std::vector<Expr> args;
    SourceLoc loc;

    static Expr lit(Value v, SourceLoc loc = {});
    static Expr ref(std::string name, SourceLoc loc = {});
    static Expr unary(ExprOp op, Expr operand, SourceLoc loc = {});
    static Expr binary(ExprOp op, Expr lhs, Expr rhs, SourceLoc loc = {});
    static Expr one_of(std::vector<Expr> alternatives, SourceLoc loc = {});

    bool operator==(const Expr&) const = default;
};

/// Raised when evaluation fails (unbound name, kind mismatch, division by zero).
class EvalError : public std::runtime_error {
public:
    EvalError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

using ValueLookup = std::function<std::optional<Value>(std::string_view)>;
using KindLookup = std::function<std::optional<ValueKind>(std::string_view)>;

/// Evaluates `expr`. `stream` may be null when the expression holds no
/// `one_of`; otherwise a choice without a stream is an error.
Value evaluate(const Expr& expr, const ValueLookup& lookup, SeededStream* stream = nullptr);

/// Static kind of an expression, or an error message.
struct KindResult {
    std::optional<ValueKind> kind;
    std::string error;
};
KindResult infer_kind(const Expr& expr, const KindLookup& lookup);

/// Every Ref name in the expression, in first-appearance order.
std::vector<std::string> referenced_names(const Expr& expr);
bool contains_choice(const Expr& expr);

/// Canonical source text; symbol literals are always quoted here because a
/// bare identifier in an expression is a reference.
std::string print(const Expr& expr);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view to_string(CmpOp op);

/// `key op literal`. In guards a bare identifier on the right is a symbol.
struct Comparison {
    std::string key;
    CmpOp op = CmpOp::Eq;
    Value rhs;
    SourceLoc loc;

    bool operator==(const Comparison&) const = default;
};

/// Conjunction of comparisons; the empty guard always holds.
struct Guard {
    std::vector<Comparison> terms;

    bool operator==(const Guard&) const = default;
};

/// A comparison over an absent key is false.
bool holds(const Guard& guard, const ValueLookup& lookup);
std::string print(const Guard& guard);

}  // namespace masforge
