#include "masforge/diagnostics.hpp"

#include <algorithm>

#include <json.hpp>

namespace masforge {

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const {
    return diagnostics.size() - error_count();
}

bool ValidationReport::has(const std::string& code) const {
    return count(code) > 0;
}

std::size_t ValidationReport::count(const std::string& code) const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [&](const Diagnostic& d) { return d.code == code; }));
}

void ValidationReport::error(std::string code, std::string message, SourceLoc loc, SourceLoc related) {
    diagnostics.push_back({Severity::Error, std::move(code), std::move(message), loc, related});
}

void ValidationReport::warning(std::string code, std::string message, SourceLoc loc) {
    diagnostics.push_back({Severity::Warning, std::move(code), std::move(message), loc, {}});
}

void ValidationReport::append(const ValidationReport& other) {
    diagnostics.insert(diagnostics.end(), other.diagnostics.begin(), other.diagnostics.end());
}

std::string_view to_string(Severity s) {
    return s == Severity::Error ? "error" : "warning";
}

std::string render_text(const Diagnostic& d, const std::string& file) {
    std::string out = file;
    if (d.loc.known()) out += ":" + to_string(d.loc);
    out += ": ";
    out += to_string(d.severity);
    out += "[" + d.code + "]: " + d.message;
    if (d.related.known()) out += " (see " + to_string(d.related) + ")";
    return out;
}

std::string render_machine(const Diagnostic& d, const std::string& file) {
    nlohmann::json j;
    j["code"] = d.code;
    j["file"] = file;
    j["line"] = d.loc.line;
    j["column"] = d.loc.column;
    j["message"] = d.message;
    j["severity"] = std::string(to_string(d.severity));
    if (d.related.known()) {
        j["related_line"] = d.related.line;
        j["related_column"] = d.related.column;
    }
    return j.dump();
}

}  // namespace masforge
