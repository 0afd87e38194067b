#include <set>

#include "masforge/modelc/scaffold.hpp"

namespace masforge {

namespace {

struct Tag {
    std::size_t open = 0;   // offset of "{{"
    std::size_t close = 0;  // offset just past "}}"
    std::string body;       // trimmed text between the braces
};

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<Tag> next_tag(std::string_view text, std::size_t from) {
    std::size_t open = text.find("{{", from);
    if (open == std::string_view::npos) return std::nullopt;
    std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) throw ModelError("E-TEMPLATE", "unterminated '{{' in template");
    return Tag{open, close + 2, trim(text.substr(open + 2, close - open - 2))};
}

// Offset of the {{/each}} that closes the block whose body starts at `from`.
Tag matching_end(std::string_view text, std::size_t from) {
    int depth = 0;
    std::size_t pos = from;
    while (auto tag = next_tag(text, pos)) {
        if (tag->body.rfind("#each ", 0) == 0) {
            ++depth;
        } else if (tag->body == "/each") {
            if (depth == 0) return *tag;
            --depth;
        }
        pos = tag->close;
    }
    throw ModelError("E-TEMPLATE", "'{{#each}}' without '{{/each}}'");
}

using Chain = std::vector<const TemplateScope*>;

const std::string& lookup_value(const Chain& chain, const std::string& name) {
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if (auto v = (*it)->values.find(name); v != (*it)->values.end()) return v->second;
    }
    throw ModelError("E-TEMPLATE", "unknown template placeholder '" + name + "'");
}

const std::vector<TemplateScope>& lookup_list(const Chain& chain, const std::string& name) {
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if (auto v = (*it)->lists.find(name); v != (*it)->lists.end()) return v->second;
    }
    throw ModelError("E-TEMPLATE", "unknown template list '" + name + "'");
}

void render(std::string_view text, Chain& chain, std::string& out) {
    std::size_t pos = 0;
    while (auto tag = next_tag(text, pos)) {
        out.append(text.substr(pos, tag->open - pos));
        if (tag->body.rfind("#each ", 0) == 0) {
            const auto& items = lookup_list(chain, trim(tag->body.substr(6)));
            Tag end = matching_end(text, tag->close);
            std::string_view body = text.substr(tag->close, end.open - tag->close);
            for (const auto& item : items) {
                chain.push_back(&item);
                render(body, chain, out);
                chain.pop_back();
            }
            pos = end.close;
        } else if (tag->body == "/each") {
            throw ModelError("E-TEMPLATE", "'{{/each}}' without '{{#each}}'");
        } else {
            out += lookup_value(chain, tag->body);
            pos = tag->close;
        }
    }
    out.append(text.substr(pos));
}

}  // namespace

std::string render_template(std::string_view text, const TemplateScope& scope) {
    Chain chain{&scope};
    std::string out;
    render(text, chain, out);
    return out;
}

std::vector<std::string> template_names(std::string_view text) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    std::size_t pos = 0;
    while (auto tag = next_tag(text, pos)) {
        std::string name = tag->body.rfind("#each ", 0) == 0 ? trim(tag->body.substr(6)) : tag->body;
        if (name != "/each" && seen.insert(name).second) names.push_back(name);
        pos = tag->close;
    }
    return names;
}

std::string_view to_string(ArtifactRole role) {
    switch (role) {
    case ArtifactRole::AgentStub: return "agent stub";
    case ArtifactRole::EnvironmentStub: return "environment stub";
    case ArtifactRole::BuildManifest: return "build manifest";
    case ArtifactRole::Readme: return "readme";
    case ArtifactRole::CommonTypes: return "common types";
    case ArtifactRole::Associations: return "associations";
    case ArtifactRole::AppEntry: return "app entry";
    }
    return "?";
}

namespace {

constexpr const char* kAgentStub = R"(// {{name}}: {{stereotype}} agent of model {{model}} ({{family}}).
// Generated by masforge. Only code inside keep regions survives regeneration.
#include "common/model_types.hpp"

namespace {{model}} {

class {{name}} {
public:
{{#each operations}}    void {{op}}() {
        // <masforge:keep {{name}}.{{op}}>
        // </masforge:keep>
    }

{{/each}}private:
{{#each attributes}}    {{ctype}} {{section}}_{{attr}}{};
{{/each}}    // <masforge:keep {{name}}.members>
    // </masforge:keep>
};

}  // namespace {{model}}
)";

constexpr const char* kEnvironmentStub = R"(// {{name}}: environment of model {{model}}.
// deterministic: {{deterministic}}, static: {{static}}, continuous: {{continuous}}
// Generated by masforge. Only code inside keep regions survives regeneration.
#include "common/model_types.hpp"

namespace {{model}} {

class {{name}} {
public:
{{#each operations}}    void {{op}}() {
        // <masforge:keep {{name}}.{{op}}>
        // </masforge:keep>
    }

{{/each}}private:
    {{name}}State state_{};
    // <masforge:keep {{name}}.members>
    // </masforge:keep>
};

}  // namespace {{model}}
)";

constexpr const char* kCommonTypes = R"(// Shared types of model {{model}}. Generated by masforge.
#pragma once

#include <cstdint>
#include <string>

namespace {{model}} {

enum class AgentId {
{{#each agents}}    {{name}},
{{/each}}};

struct {{environment}}State {
{{#each states}}    {{ctype}} {{name}}{};
{{/each}}};

// <masforge:keep common.types>
// </masforge:keep>

}  // namespace {{model}}
)";

constexpr const char* kAssociations = R"(// Action and interaction classes of model {{model}}. Generated by masforge.
#pragma once

#include "common/model_types.hpp"

namespace {{model}} {
{{#each associations}}
// {{stereotype}}
class {{name}} {
public:
{{#each operations}}    void {{op}}() {
        // <masforge:keep {{name}}.{{op}}>
        // </masforge:keep>
    }
{{/each}}
private:
{{#each attributes}}    {{ctype}} {{section}}_{{attr}}{};
{{/each}}};
{{/each}}
}  // namespace {{model}}
)";

constexpr const char* kAppEntry = R"(// Runner entry point of model {{model}}. Generated by masforge.
#include "common/associations.hpp"

int main() {
    // <masforge:keep app.main>
    // </masforge:keep>
    return 0;
}
)";

constexpr const char* kBuildManifest = R"(cmake_minimum_required(VERSION 3.20)
project({{model}} LANGUAGES CXX)
set(CMAKE_CXX_STANDARD 20)
set(CMAKE_CXX_STANDARD_REQUIRED ON)

add_library({{model}}_core
{{#each sources}}  {{path}}
{{/each}})
target_include_directories({{model}}_core PUBLIC ${CMAKE_CURRENT_SOURCE_DIR})

add_executable({{model}}_app app/main.cpp)
target_link_libraries({{model}}_app PRIVATE {{model}}_core)
)";

constexpr const char* kReadme = R"(# {{model}}

Project scaffold generated by masforge (profile `{{profile}}`) from `model/{{model}}.mas`.

- `model/` canonical copy of the model
- `common/` shared types, action and interaction classes
- `core/` agent and environment classes
- `app/` runner entry point

Write code only inside the `masforge:keep` comment pairs.
Regeneration keeps those lines and rewrites everything else.

## Classes

{{#each classes}}- `{{title}}` ({{stereotype}})
{{/each}})";

const TemplateSet kSelf{"self",
                        {{ArtifactRole::AgentStub, kAgentStub},
                         {ArtifactRole::EnvironmentStub, kEnvironmentStub},
                         {ArtifactRole::BuildManifest, kBuildManifest},
                         {ArtifactRole::Readme, kReadme},
                         {ArtifactRole::CommonTypes, kCommonTypes},
                         {ArtifactRole::Associations, kAssociations},
                         {ArtifactRole::AppEntry, kAppEntry}}};

}  // namespace

const TemplateSet* find_profile(std::string_view name) {
    if (name == kSelf.profile) return &kSelf;
    return nullptr;
}

}  // namespace masforge
