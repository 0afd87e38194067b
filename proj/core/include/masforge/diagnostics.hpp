#pragma once

#include <string>
#include <vector>

#include "masforge/expr.hpp"

namespace masforge {

enum class Severity { Error, Warning };

/// One finding. Tests match on `code`; `message` is prose and may change.
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceLoc loc;
    SourceLoc related;  // second site, e.g. the first declaration of a duplicate

    // Locations compare by value here so report purity checks see them.
    friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
        return a.severity == b.severity && a.code == b.code && a.message == b.message &&
               a.loc.line == b.loc.line && a.loc.column == b.loc.column &&
               a.related.line == b.related.line && a.related.column == b.related.column;
    }
};

struct ValidationReport {
    std::vector<Diagnostic> diagnostics;

    bool passes() const { return error_count() == 0; }
    std::size_t error_count() const;
    std::size_t warning_count() const;
    bool has(const std::string& code) const;
    std::size_t count(const std::string& code) const;

    void error(std::string code, std::string message, SourceLoc loc = {}, SourceLoc related = {});
    void warning(std::string code, std::string message, SourceLoc loc = {});
    void append(const ValidationReport& other);

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

std::string_view to_string(Severity s);

/// `file:line:col: error[CODE]: message`
std::string render_text(const Diagnostic& d, const std::string& file);
/// One JSON object per line with sorted keys.
std::string render_machine(const Diagnostic& d, const std::string& file);

}  // namespace masforge
