#include "masforge/expr.hpp"

#include <algorithm>
#include <limits>

namespace masforge {

std::string to_string(const SourceLoc& loc) {
    return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t tick, std::uint64_t phase)
    : engine_(splitmix64(splitmix64(splitmix64(seed) ^ tick) ^ phase)) {}

std::size_t SeededStream::below(std::size_t n) {
    const std::uint64_t bound = n;
    // Reject the low residue class so every index is equally likely.
    const std::uint64_t threshold = (std::numeric_limits<std::uint64_t>::max() - bound + 1) % bound;
    for (;;) {
        std::uint64_t r = engine_();
        if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
}

Expr Expr::lit(Value v, SourceLoc loc) {
    Expr e;
    e.op = ExprOp::Literal;
    e.literal = std::move(v);
    e.loc = loc;
    return e;
}

Expr Expr::ref(std::string name, SourceLoc loc) {
    Expr e;
    e.op = ExprOp::Ref;
    e.name = std::move(name);
    e.loc = loc;
    return e;
}

Expr Expr::unary(ExprOp op, Expr operand, SourceLoc loc) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(operand));
    e.loc = loc;
    return e;
}

Expr Expr::binary(ExprOp op, Expr lhs, Expr rhs, SourceLoc loc) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    e.loc = loc;
    return e;
}

Expr Expr::one_of(std::vector<Expr> alternatives, SourceLoc loc) {
    Expr e;
    e.op = ExprOp::OneOf;
    e.args = std::move(alternatives);
    e.loc = loc;
    return e;
}

namespace {

std::string_view op_symbol(ExprOp op) {
    switch (op) {
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Div: return "/";
    default: return "?";
    }
}

// Integer arithmetic wraps instead of overflowing.
std::int64_t wrap(ExprOp op, std::int64_t a, std::int64_t b) {
    auto ua = static_cast<std::uint64_t>(a);
    auto ub = static_cast<std::uint64_t>(b);
    switch (op) {
    case ExprOp::Add: return static_cast<std::int64_t>(ua + ub);
    case ExprOp::Sub: return static_cast<std::int64_t>(ua - ub);
    case ExprOp::Mul: return static_cast<std::int64_t>(ua * ub);
    default: break;
    }
    if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return a;
    return a / b;
}

}  // namespace

Value evaluate(const Expr& expr, const ValueLookup& lookup, SeededStream* stream) {
    switch (expr.op) {
    case ExprOp::Literal:
        return expr.literal;
    case ExprOp::Ref: {
        auto v = lookup(expr.name);
        if (!v) throw EvalError("E-UNBOUND", "unbound name '" + expr.name + "'");
        return *v;
    }
    case ExprOp::Neg: {
        Value v = evaluate(expr.args.at(0), lookup, stream);
        if (v.is_int()) return Value::integer(wrap(ExprOp::Sub, 0, v.as_int()));
        if (v.is_real()) return Value::real(-v.as_real());
        throw EvalError("E-KIND", "cannot negate symbol '" + v.as_symbol() + "'");
    }
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div: {
        Value a = evaluate(expr.args.at(0), lookup, stream);
        Value b = evaluate(expr.args.at(1), lookup, stream);
        if (!a.is_numeric() || !b.is_numeric()) {
            throw EvalError("E-KIND", "operator '" + std::string(op_symbol(expr.op)) + "' needs numeric operands");
        }
        if (a.is_int() && b.is_int()) {
            if (expr.op == ExprOp::Div && b.as_int() == 0) throw EvalError("E-DIV-ZERO", "integer division by zero");
            return Value::integer(wrap(expr.op, a.as_int(), b.as_int()));
        }
        double x = a.to_double();
        double y = b.to_double();
        switch (expr.op) {
        case ExprOp::Add: return Value::real(x + y);
        case ExprOp::Sub: return Value::real(x - y);
        case ExprOp::Mul: return Value::real(x * y);
        default:
            if (y == 0.0) throw EvalError("E-DIV-ZERO", "real division by zero");
            return Value::real(x / y);
        }
    }
    case ExprOp::OneOf: {
        if (expr.args.empty()) throw EvalError("E-EMPTY-CHOICE", "one_of needs at least one alternative");
        if (stream == nullptr) throw EvalError("E-NONDET", "one_of evaluated without a seeded stream");
        std::size_t pick = stream->below(expr.args.size());
        return evaluate(expr.args[pick], lookup, stream);
    }
    }
    throw EvalError("E-INTERNAL", "unknown expression node");
}

KindResult infer_kind(const Expr& expr, const KindLookup& lookup) {
    switch (expr.op) {
    case ExprOp::Literal:
        return {expr.literal.kind(), {}};
    case ExprOp::Ref: {
        auto k = lookup(expr.name);
        if (!k) return {std::nullopt, "unresolved name '" + expr.name + "'"};
        return {k, {}};
    }
    case ExprOp::Neg: {
        auto inner = infer_kind(expr.args.at(0), lookup);
        if (!inner.kind) return inner;
        if (*inner.kind == ValueKind::Symbol) return {std::nullopt, "cannot negate a symbol"};
        return inner;
    }
    case ExprOp::OneOf: {
        std::optional<ValueKind> out;
        for (const auto& alt : expr.args) {
            auto k = infer_kind(alt, lookup);
            if (!k.kind) return k;
            if (!out) {
                out = k.kind;
            } else if (*out != *k.kind) {
                bool numeric = *out != ValueKind::Symbol && *k.kind != ValueKind::Symbol;
                if (!numeric) return {std::nullopt, "one_of alternatives mix symbols and numbers"};
                out = ValueKind::Real;
            }
        }
        if (!out) return {std::nullopt, "one_of needs at least one alternative"};
        return {out, {}};
    }
    default: {
        auto a = infer_kind(expr.args.at(0), lookup);
        if (!a.kind) return a;
        auto b = infer_kind(expr.args.at(1), lookup);
        if (!b.kind) return b;
        if (*a.kind == ValueKind::Symbol || *b.kind == ValueKind::Symbol) {
            return {std::nullopt, "operator '" + std::string(op_symbol(expr.op)) + "' needs numeric operands"};
        }
        if (*a.kind == ValueKind::Int && *b.kind == ValueKind::Int) return {ValueKind::Int, {}};
        return {ValueKind::Real, {}};
    }
    }
}

namespace {

void collect_refs(const Expr& expr, std::vector<std::string>& out) {
    if (expr.op == ExprOp::Ref && std::find(out.begin(), out.end(), expr.name) == out.end()) {
        out.push_back(expr.name);
    }
    for (const auto& a : expr.args) collect_refs(a, out);
}

int precedence(const Expr& e) {
    switch (e.op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Neg: return 3;
    case ExprOp::Literal:
        // A negative literal prints with a leading minus, like a negation.
        return (e.literal.is_numeric() && e.literal.literal().front() == '-') ? 3 : 4;
    default: return 4;
    }
}

std::string print_atom_literal(const Value& v) {
    return v.is_symbol() ? quote_symbol(v.as_symbol()) : v.literal();
}

}  // namespace

std::vector<std::string> referenced_names(const Expr& expr) {
    std::vector<std::string> out;
    collect_refs(expr, out);
    return out;
}

bool contains_choice(const Expr& expr) {
    if (expr.op == ExprOp::OneOf) return true;
    return std::any_of(expr.args.begin(), expr.args.end(), [](const Expr& a) { return contains_choice(a); });
}

std::string print(const Expr& expr) {
    switch (expr.op) {
    case ExprOp::Literal: return print_atom_literal(expr.literal);
    case ExprOp::Ref: return expr.name;
    case ExprOp::Neg: {
        const auto& inner = expr.args.at(0);
        std::string s = print(inner);
        // `-(-3)` and `-(a + b)` need parentheses to survive a reparse.
        if (precedence(inner) < 4) s = "(" + s + ")";
        return "-" + s;
    }
    case ExprOp::OneOf: {
        std::string s = "one_of(";
        for (std::size_t i = 0; i < expr.args.size(); ++i) {
            if (i) s += ", ";
            s += print(expr.args[i]);
        }
        return s + ")";
    }
    default: {
        int p = precedence(expr);
        std::string lhs = print(expr.args.at(0));
        std::string rhs = print(expr.args.at(1));
        if (precedence(expr.args[0]) < p) lhs = "(" + lhs + ")";
        if (precedence(expr.args[1]) <= p) rhs = "(" + rhs + ")";
        return lhs + " " + std::string(op_symbol(expr.op)) + " " + rhs;
    }
    }
}

std::string_view to_string(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

bool holds(const Guard& guard, const ValueLookup& lookup) {
    for (const auto& term : guard.terms) {
        auto v = lookup(term.key);
        if (!v) return false;
        auto c = compare_values(*v, term.rhs);
        bool ok = false;
        switch (term.op) {
        case CmpOp::Eq: ok = c && *c == 0; break;
        case CmpOp::Ne: ok = !c || *c != 0; break;
        case CmpOp::Lt: ok = c && *c < 0; break;
        case CmpOp::Le: ok = c && *c <= 0; break;
        case CmpOp::Gt: ok = c && *c > 0; break;
        case CmpOp::Ge: ok = c && *c >= 0; break;
        }
        if (!ok) return false;
    }
    return true;
}

std::string print(const Guard& guard) {
    if (guard.terms.empty()) return "true";
    std::string s;
    for (std::size_t i = 0; i < guard.terms.size(); ++i) {
        if (i) s += " and ";
        const auto& t = guard.terms[i];
        s += t.key + " " + std::string(to_string(t.op)) + " " + t.rhs.literal();
    }
    return s;
}

}  // namespace masforge
