#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "masforge/metamodel.hpp"
#include "masforge/modelc/syntax.hpp"

namespace masforge {

// --- templates ---------------------------------------------------------------

/// Values a template can see. Lookups that miss here continue in the
/// enclosing scope.
struct TemplateScope {
    std::map<std::string, std::string> values;
    std::map<std::string, std::vector<TemplateScope>> lists;
};

/// `{{name}}` substitutes a value; `{{#each list}} ... {{/each}}` repeats its
/// body once per list item. Throws ModelError("E-TEMPLATE") on an unknown
/// name or an unbalanced block.
std::string render_template(std::string_view text, const TemplateScope& scope);

/// Names a template refers to (values and lists), in first-use order.
std::vector<std::string> template_names(std::string_view text);

enum class ArtifactRole { AgentStub, EnvironmentStub, BuildManifest, Readme, CommonTypes, Associations, AppEntry };
std::string_view to_string(ArtifactRole role);

struct TemplateSet {
    std::string profile;
    std::map<ArtifactRole, std::string> templates;
};

/// Shipped profiles; currently only "self". Null when unknown.
const TemplateSet* find_profile(std::string_view name);

// --- plan --------------------------------------------------------------------

struct ScaffoldFile {
    std::string path;  // relative, '/'-separated
    std::string contents;
    std::vector<std::string> regions;  // protected region names in file order

    bool operator==(const ScaffoldFile&) const = default;
};

/// Files in path-ascending order.
struct ScaffoldPlan {
    std::string profile;
    std::vector<ScaffoldFile> files;

    const ScaffoldFile* find(std::string_view path) const;
    bool operator==(const ScaffoldPlan&) const = default;
};

/// Back-converts a model to its parse tree (for the canonical model copy).
Ast to_ast(const ModelSpec& model);

/// Throws ModelError: E-UNVALIDATED for a failing model, E-NO-PROFILE for an
/// unknown profile.
ScaffoldPlan pim_to_psm(const ModelSpec& model, std::string_view profile = "self");

/// FNV-1a 64 over every (path, NUL, contents, NUL) in plan order.
std::uint64_t plan_digest(const ScaffoldPlan& plan);
std::string hex_digest(std::uint64_t digest);

// --- protected regions --------------------------------------------------------

inline constexpr std::string_view kKeepOpen = "// <masforge:keep ";
inline constexpr std::string_view kKeepClose = "// </masforge:keep>";

/// Body of a region: from just after the opening marker's line break up to
/// the closing marker.
struct Region {
    std::string name;
    std::size_t body_begin = 0;
    std::size_t body_end = 0;
};

/// Throws ModelError("E-MARKERS") for unclosed, nested, stray or duplicate
/// markers.
std::vector<Region> find_regions(std::string_view text);

struct MergeResult {
    std::string contents;
    std::size_t carried = 0;            // regions whose old body was kept
    std::vector<std::string> dropped;   // old regions with no home in the new text
};

/// Takes `fresh` and replaces each region body with the body of the
/// same-named region in `existing`.
MergeResult merge_regions(std::string_view fresh, std::string_view existing);

// --- writing ------------------------------------------------------------------

class GenerateError : public std::runtime_error {
public:
    GenerateError(std::string code, std::string path, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), path_(std::move(path)) {}
    const std::string& code() const { return code_; }
    const std::string& path() const { return path_; }

private:
    std::string code_;
    std::string path_;
};

struct WriteReport {
    std::vector<std::string> created;
    std::vector<std::string> updated;
    std::vector<std::string> unchanged;
    std::size_t preserved = 0;  // protected regions carried over
    std::vector<std::string> orphans;
    std::vector<std::string> dropped_regions;  // "path: region"
};

inline constexpr std::string_view kLockFile = ".masforge.lock";
inline constexpr std::string_view kManifestFile = ".masforge-manifest";
inline constexpr std::string_view kStagingDir = ".masforge-staging";

/// Writes the plan under `out_dir`, carrying protected regions over from
/// files already there. Everything is staged first, so a failure leaves the
/// tree untouched. Files from an earlier plan that this one no longer has
/// are reported as orphans and left in place. Throws GenerateError with
/// E-LOCKED, E-MARKERS or E-IO.
WriteReport generate(const ScaffoldPlan& plan, const std::filesystem::path& out_dir);

}  // namespace masforge
