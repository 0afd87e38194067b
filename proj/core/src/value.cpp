#include "masforge/value.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace masforge {

std::string_view to_string(ValueKind kind) {
    switch (kind) {
    case ValueKind::Int: return "int";
    case ValueKind::Symbol: return "symbol";
    case ValueKind::Real: return "real";
    }
    return "?";
}

std::optional<ValueKind> parse_value_kind(std::string_view word) {
    if (word == "int") return ValueKind::Int;
    if (word == "symbol") return ValueKind::Symbol;
    if (word == "real") return ValueKind::Real;
    return std::nullopt;
}

ValueKind Value::kind() const {
    if (is_int()) return ValueKind::Int;
    if (is_real()) return ValueKind::Real;
    return ValueKind::Symbol;
}

double Value::to_double() const {
    return is_int() ? static_cast<double>(as_int()) : as_real();
}

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(text.front())) return false;
    for (char c : text) {
        if (!alpha(c) && !digit(c)) return false;
    }
    return true;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string out(buf.data(), end);
    if (out.find_first_of(".e") == std::string::npos) out += ".0";
    return out;
}

std::string quote_symbol(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string Value::literal() const {
    if (is_int()) return std::to_string(as_int());
    if (is_real()) return format_real(as_real());
    const auto& s = as_symbol();
    // Keywords that the grammar reads as booleans must stay quoted.
    if (is_identifier(s) && s != "true" && s != "false" && s != "and") return s;
    return quote_symbol(s);
}

std::string Value::display() const {
    return is_symbol() ? as_symbol() : literal();
}

std::optional<int> compare_values(const Value& a, const Value& b) {
    if (a.is_symbol() != b.is_symbol()) return std::nullopt;
    if (a.is_symbol()) {
        int c = a.as_symbol().compare(b.as_symbol());
        return (c > 0) - (c < 0);
    }
    if (a.is_int() && b.is_int()) {
        return (a.as_int() > b.as_int()) - (a.as_int() < b.as_int());
    }
    double x = a.to_double();
    double y = b.to_double();
    return (x > y) - (x < y);
}

bool assignable(ValueKind kind, const Value& v) {
    switch (kind) {
    case ValueKind::Int: return v.is_int();
    case ValueKind::Real: return v.is_numeric();
    case ValueKind::Symbol: return v.is_symbol();
    }
    return false;
}

bool assignable(ValueKind slot, ValueKind value) {
    return slot == value || (slot == ValueKind::Real && value == ValueKind::Int);
}

Value coerce(ValueKind kind, const Value& v) {
    if (kind == ValueKind::Real && v.is_int()) return Value::real(static_cast<double>(v.as_int()));
    return v;
}

}  // namespace masforge
