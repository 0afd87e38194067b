#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "masforge/modelc/scaffold.hpp"

namespace masforge {

namespace fs = std::filesystem;

const ScaffoldFile* ScaffoldPlan::find(std::string_view path) const {
    auto it = std::find_if(files.begin(), files.end(), [&](const ScaffoldFile& f) { return f.path == path; });
    return it == files.end() ? nullptr : &*it;
}

Ast to_ast(const ModelSpec& model) {
    Ast ast;
    ast.model_name = model.name;
    ast.environments.push_back(model.environment);
    for (const auto& a : model.agents) ast.agents.push_back({std::string(to_string(a.kind)), a.loc, a});
    ast.actions = model.actions;
    ast.interactions = model.interactions;
    return ast;
}

namespace {

std::string ctype(const std::string& type) {
    if (type == "int") return "std::int64_t";
    if (type == "real") return "double";
    if (type == "true" || type == "false") return "bool";
    return "std::string";
}

TemplateScope class_scope(const FlatClass& c) {
    TemplateScope s;
    s.values["name"] = c.title;
    s.values["stereotype"] = c.stereotype;
    for (const auto& op : c.operations) s.lists["operations"].push_back({{{"op", op}}, {}});
    s.lists["operations"];
    for (const auto& a : c.attributes) {
        s.lists["attributes"].push_back({{{"section", a.section}, {"attr", a.name}, {"ctype", ctype(a.type)}}, {}});
    }
    s.lists["attributes"];
    return s;
}

std::string family_text(AgentKind kind) {
    std::string s;
    for (auto k : kind_family(kind)) {
        if (!s.empty()) s += " < ";
        s += to_string(k);
    }
    return s;
}

std::vector<std::string> region_names(const std::string& text) {
    std::vector<std::string> names;
    for (const auto& r : find_regions(text)) names.push_back(r.name);
    return names;
}

}  // namespace

ScaffoldPlan pim_to_psm(const ModelSpec& model, std::string_view profile) {
    const TemplateSet* set = find_profile(profile);
    if (set == nullptr) throw ModelError("E-NO-PROFILE", "no template profile named '" + std::string(profile) + "'");
    FlatClassModel flat = flatten(model);

    TemplateScope root;
    root.values["model"] = model.name;
    root.values["profile"] = set->profile;
    root.values["environment"] = model.environment.name;
    auto& agents = root.lists["agents"];
    auto& states = root.lists["states"];
    auto& associations = root.lists["associations"];
    auto& classes = root.lists["classes"];
    auto& sources = root.lists["sources"];

    std::vector<ScaffoldFile> files;
    auto emit = [&](std::string path, ArtifactRole role, const TemplateScope& scope) {
        std::string contents = render_template(set->templates.at(role), scope);
        files.push_back({std::move(path), contents, region_names(contents)});
    };

    for (const auto& s : model.environment.state_vars) {
        states.push_back({{{"name", s.name}, {"ctype", ctype(std::string(to_string(s.kind)))}}, {}});
    }
    for (const auto& c : flat.classes) {
        classes.push_back({{{"title", c.title}, {"stereotype", c.stereotype}}, {}});
        switch (c.role) {
        case FlatClassRole::Environment:
            sources.push_back({{{"path", "core/environment/" + c.title + ".cpp"}}, {}});
            break;
        case FlatClassRole::Agent:
            agents.push_back({{{"name", c.title}}, {}});
            sources.push_back({{{"path", "core/agents/" + c.title + ".cpp"}}, {}});
            break;
        case FlatClassRole::Action:
        case FlatClassRole::Interaction:
            associations.push_back(class_scope(c));
            break;
        }
    }

    // Per-class files see the root scope through a merged copy.
    auto with_root = [&](TemplateScope s) {
        for (const auto& [k, v] : root.values) s.values.emplace(k, v);
        for (const auto& [k, v] : root.lists) s.lists.emplace(k, v);
        return s;
    };
    for (const auto& c : flat.classes) {
        if (c.role == FlatClassRole::Environment) {
            TemplateScope s = class_scope(c);
            s.values["deterministic"] = model.environment.deterministic ? "true" : "false";
            s.values["static"] = model.environment.static_flag ? "true" : "false";
            s.values["continuous"] = model.environment.continuous ? "true" : "false";
            emit("core/environment/" + c.title + ".cpp", ArtifactRole::EnvironmentStub, with_root(std::move(s)));
        } else if (c.role == FlatClassRole::Agent) {
            TemplateScope s = class_scope(c);
            s.values["family"] = family_text(model.find_agent(c.title)->kind);
            emit("core/agents/" + c.title + ".cpp", ArtifactRole::AgentStub, with_root(std::move(s)));
        }
    }
    emit("CMakeLists.txt", ArtifactRole::BuildManifest, root);
    emit("README.md", ArtifactRole::Readme, root);
    emit("app/main.cpp", ArtifactRole::AppEntry, root);
    emit("common/model_types.hpp", ArtifactRole::CommonTypes, root);
    emit("common/associations.hpp", ArtifactRole::Associations, root);
    files.push_back({"model/" + model.name + ".mas", print(to_ast(model)), {}});

    std::sort(files.begin(), files.end(), [](const ScaffoldFile& a, const ScaffoldFile& b) { return a.path < b.path; });
    return {set->profile, std::move(files)};
}

std::uint64_t plan_digest(const ScaffoldPlan& plan) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto byte = [&](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    auto feed = [&](std::string_view s) {
        for (unsigned char c : s) byte(c);
        byte(0);
    };
    for (const auto& f : plan.files) {
        feed(f.path);
        feed(f.contents);
    }
    return h;
}

std::string hex_digest(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::vector<Region> find_regions(std::string_view text) {
    std::vector<Region> regions;
    std::set<std::string> names;
    std::size_t pos = 0;
    while (true) {
        std::size_t open = text.find(kKeepOpen, pos);
        std::size_t close = text.find(kKeepClose, pos);
        if (open == std::string_view::npos) {
            if (close != std::string_view::npos) throw ModelError("E-MARKERS", "closing keep marker without an opening one");
            break;
        }
        if (close != std::string_view::npos && close < open) {
            throw ModelError("E-MARKERS", "closing keep marker without an opening one");
        }
        std::size_t name_begin = open + kKeepOpen.size();
        std::size_t gt = text.find('>', name_begin);
        std::size_t eol = text.find('\n', name_begin);
        if (gt == std::string_view::npos || eol == std::string_view::npos || gt > eol) {
            throw ModelError("E-MARKERS", "malformed keep marker");
        }
        std::string name(text.substr(name_begin, gt - name_begin));
        if (name.empty()) throw ModelError("E-MARKERS", "keep marker without a name");
        if (!names.insert(name).second) throw ModelError("E-MARKERS", "duplicate keep region '" + name + "'");
        std::size_t body = eol + 1;
        std::size_t end = text.find(kKeepClose, body);
        if (end == std::string_view::npos) throw ModelError("E-MARKERS", "keep region '" + name + "' is never closed");
        std::size_t nested = text.find(kKeepOpen, body);
        if (nested != std::string_view::npos && nested < end) {
            throw ModelError("E-MARKERS", "keep region '" + name + "' contains another keep marker");
        }
        regions.push_back({std::move(name), body, end});
        pos = end + kKeepClose.size();
    }
    return regions;
}

MergeResult merge_regions(std::string_view fresh, std::string_view existing) {
    auto old_regions = find_regions(existing);
    auto new_regions = find_regions(fresh);
    std::map<std::string, std::string_view> old_bodies;
    for (const auto& r : old_regions) old_bodies[r.name] = existing.substr(r.body_begin, r.body_end - r.body_begin);

    MergeResult out;
    std::size_t pos = 0;
    std::set<std::string> placed;
    for (const auto& r : new_regions) {
        out.contents.append(fresh.substr(pos, r.body_begin - pos));
        if (auto it = old_bodies.find(r.name); it != old_bodies.end()) {
            out.contents.append(it->second);
            ++out.carried;
        } else {
            out.contents.append(fresh.substr(r.body_begin, r.body_end - r.body_begin));
        }
        placed.insert(r.name);
        pos = r.body_end;
    }
    out.contents.append(fresh.substr(pos));
    for (const auto& r : old_regions) {
        if (!placed.count(r.name)) out.dropped.push_back(r.name);
    }
    return out;
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw GenerateError("E-IO", p.string(), "cannot read '" + p.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& p, std::string_view contents) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw GenerateError("E-IO", p.parent_path().string(), "cannot create '" + p.parent_path().string() + "'");
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) throw GenerateError("E-IO", p.string(), "cannot write '" + p.string() + "'");
}

class DirLock {
public:
    explicit DirLock(fs::path path) : path_(std::move(path)) {
        FILE* f = std::fopen(path_.string().c_str(), "wx");
        if (f == nullptr) {
            if (fs::exists(path_)) {
                throw GenerateError("E-LOCKED", path_.string(), "another generation holds '" + path_.string() + "'");
            }
            throw GenerateError("E-IO", path_.string(), "cannot create lock '" + path_.string() + "'");
        }
        std::fclose(f);
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    fs::path path_;
};

std::vector<std::string> read_manifest(const fs::path& p) {
    std::vector<std::string> paths;
    if (!fs::exists(p)) return paths;
    std::istringstream in(read_file(p));
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) paths.push_back(line);
    }
    return paths;
}

}  // namespace

WriteReport generate(const ScaffoldPlan& plan, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw GenerateError("E-IO", out_dir.string(), "cannot create output directory '" + out_dir.string() + "'");
    }
    DirLock lock(out_dir / kLockFile);

    WriteReport report;
    const fs::path staging = out_dir / kStagingDir;
    fs::remove_all(staging, ec);

    struct Staged {
        std::string path;
        bool existed;
    };
    std::vector<Staged> staged;
    try {
        for (const auto& file : plan.files) {
            const fs::path target = out_dir / file.path;
            std::string contents = file.contents;
            bool existed = fs::exists(target);
            if (existed) {
                std::string current = read_file(target);
                MergeResult merged;
                try {
                    merged = merge_regions(file.contents, current);
                } catch (const ModelError& e) {
                    throw GenerateError("E-MARKERS", target.string(), target.string() + ": " + e.what());
                }
                contents = std::move(merged.contents);
                report.preserved += merged.carried;
                for (const auto& d : merged.dropped) report.dropped_regions.push_back(file.path + ": " + d);
                if (contents == current) {
                    report.unchanged.push_back(file.path);
                    continue;
                }
                report.updated.push_back(file.path);
            } else {
                report.created.push_back(file.path);
            }
            write_file(staging / file.path, contents);
            staged.push_back({file.path, existed});
        }
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }

    for (const auto& s : staged) {
        const fs::path target = out_dir / s.path;
        fs::create_directories(target.parent_path(), ec);
        fs::rename(staging / s.path, target, ec);
        if (ec) {
            fs::remove_all(staging, ec);
            throw GenerateError("E-IO", target.string(), "cannot move '" + s.path + "' into place");
        }
    }
    fs::remove_all(staging, ec);

    std::set<std::string> planned;
    for (const auto& f : plan.files) planned.insert(f.path);
    std::set<std::string> manifest(planned);
    for (const auto& old : read_manifest(out_dir / kManifestFile)) {
        if (!planned.count(old) && fs::exists(out_dir / old)) {
            report.orphans.push_back(old);
            manifest.insert(old);
        }
    }
    std::string text;
    for (const auto& p : manifest) text += p + "\n";
    write_file(out_dir / kManifestFile, text);
    return report;
}

}  // namespace masforge
