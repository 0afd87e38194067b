#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace masforge {

/// The three value kinds a model may declare for state, attributes and percepts.
enum class ValueKind { Int, Symbol, Real };

std::string_view to_string(ValueKind kind);
std::optional<ValueKind> parse_value_kind(std::string_view word);

/// A tagged scalar. Symbols are interned-free strings; reals are IEEE doubles.
class Value {
public:
    Value() : data_(std::int64_t{0}) {}
    static Value integer(std::int64_t v) { return Value(Data{v}); }
    static Value real(double v) { return Value(Data{v}); }
    static Value symbol(std::string v) { return Value(Data{std::move(v)}); }

    ValueKind kind() const;
    bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
    bool is_real() const { return std::holds_alternative<double>(data_); }
    bool is_symbol() const { return std::holds_alternative<std::string>(data_); }
    bool is_numeric() const { return !is_symbol(); }

    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    double as_real() const { return std::get<double>(data_); }
    const std::string& as_symbol() const { return std::get<std::string>(data_); }

    /// Numeric view; ints widen to double.
    double to_double() const;

    /// Canonical literal text. Reals always carry a '.' or exponent so they
    /// re-read as reals; symbols are quoted unless they are plain identifiers.
    std::string literal() const;

    /// Display text: symbols unquoted.
    std::string display() const;

    friend bool operator==(const Value&, const Value&) = default;

private:
    using Data = std::variant<std::int64_t, double, std::string>;
    explicit Value(Data d) : data_(std::move(d)) {}
    Data data_;
};

/// Total order used for guards: numerics compare numerically, symbols
/// lexicographically; a symbol never orders against a number.
std::optional<int> compare_values(const Value& a, const Value& b);

/// True when `v` may be stored in a slot of `kind` (ints widen into reals).
bool assignable(ValueKind kind, const Value& v);
bool assignable(ValueKind slot, ValueKind value);

/// Converts an assignable value to the slot's representation.
Value coerce(ValueKind kind, const Value& v);

bool is_identifier(std::string_view text);
std::string format_real(double v);
std::string quote_symbol(std::string_view text);

}  // namespace masforge
