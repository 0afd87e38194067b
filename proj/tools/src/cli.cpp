#include "masforge/cli.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "masforge/chat.hpp"
#include "masforge/modelc/compile.hpp"
#include "masforge/modelc/scaffold.hpp"
#include "masforge/runtime.hpp"

namespace masforge {

namespace {

enum class Format { Text, Machine };

struct Session {
    std::ostream& out;
    std::ostream& err;
    std::istream& in;
    CommandOptions options;
    Format format = Format::Text;
    CommandOutcome outcome;

    void emit(const Diagnostic& d, const std::string& file) {
        std::string line;
        if (format == Format::Machine) {
            line = render_machine(d, file);
        } else {
            line = render_text(d, file);
            if (options.color) {
                const char* tint = d.severity == Severity::Error ? "\x1b[31m" : "\x1b[33m";
                err << tint << line << "\x1b[0m\n";
                outcome.diagnostics.push_back(line);
                return;
            }
        }
        err << line << '\n';
        outcome.diagnostics.push_back(line);
    }

    void emit_all(const ValidationReport& report, const std::string& file) {
        for (const auto& d : report.diagnostics) emit(d, file);
        if (!report.passes()) outcome.exit_code = kExitDiagnostics;
    }

    int fail(int code, std::string diag_code, const std::string& message, const std::string& file) {
        Diagnostic d;
        d.code = std::move(diag_code);
        d.message = message;
        emit(d, file);
        outcome.exit_code = code;
        return code;
    }
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Loads and compiles; null after reporting when the model is unusable.
std::optional<CompileResult> load_model(Session& s, const std::string& path) {
    SourceText source;
    try {
        source = SourceText::load(path);
    } catch (const std::exception& e) {
        s.fail(kExitIo, "E-IO", e.what(), path);
        return std::nullopt;
    }
    CompileResult result = compile(source);
    s.emit_all(result.report, path);
    if (!result.report.passes()) return std::nullopt;
    return result;
}

std::string render_transcript_text(const Transcript& t) {
    std::string out;
    for (const auto& r : t.records) {
        out += "tick " + std::to_string(r.tick) + "  " + r.agent + "  " + std::string(to_string(r.area)) + "  ";
        if (r.cleared) {
            out += "cleared";
        } else {
            out += (r.area == ChatArea::Sent ? "to " : "from ") + r.peer + ": " + r.text;
        }
        out += '\n';
    }
    return out;
}

void print_transcript(Session& s, const Transcript& t) {
    s.out << (s.format == Format::Machine ? serialize(t) : render_transcript_text(t));
}

int do_validate(Session& s, const std::string& file) {
    auto model = load_model(s, file);
    if (!model) return s.outcome.exit_code;
    if (s.format == Format::Text) {
        s.out << file << ": ok (" << model->model.agents.size() << " agents, "
              << model->report.warning_count() << " warnings)\n";
    }
    return kExitOk;
}

int do_generate(Session& s, const std::string& file, const std::string& out_dir, const std::string& profile) {
    auto model = load_model(s, file);
    if (!model) return s.outcome.exit_code;
    ScaffoldPlan plan;
    try {
        plan = pim_to_psm(model->model, profile);
    } catch (const ModelError& e) {
        return s.fail(kExitDiagnostics, e.code(), e.what(), file);
    }
    WriteReport report;
    try {
        report = generate(plan, out_dir);
    } catch (const GenerateError& e) {
        int code = e.code() == "E-MARKERS" ? kExitDiagnostics : kExitIo;
        return s.fail(code, e.code(), e.what(), e.path());
    }
    std::filesystem::path root(out_dir);
    for (const auto& f : plan.files) s.outcome.artifacts.push_back((root / f.path).generic_string());

    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& p : report.created) rows.emplace_back(p, "created");
    for (const auto& p : report.updated) rows.emplace_back(p, "updated");
    for (const auto& p : report.unchanged) rows.emplace_back(p, "unchanged");
    for (const auto& p : report.orphans) rows.emplace_back(p, "orphan");
    std::sort(rows.begin(), rows.end());
    std::string digest = hex_digest(plan_digest(plan));
    if (s.format == Format::Machine) {
        for (const auto& [path, status] : rows) {
            s.out << nlohmann::json{{"path", path}, {"status", status}}.dump() << '\n';
        }
        for (const auto& d : report.dropped_regions) s.out << nlohmann::json{{"dropped_region", d}}.dump() << '\n';
        s.out << nlohmann::json{{"digest", digest}, {"files", plan.files.size()}, {"preserved", report.preserved}}.dump()
              << '\n';
    } else {
        for (const auto& [path, status] : rows) s.out << status << "  " << path << '\n';
        for (const auto& d : report.dropped_regions) s.out << "dropped region  " << d << '\n';
        s.out << plan.files.size() << " files, " << report.preserved << " regions preserved, digest " << digest
              << '\n';
    }
    return kExitOk;
}

int do_inspect(Session& s, const std::string& file, bool deps, bool classes) {
    auto model = load_model(s, file);
    if (!model) return s.outcome.exit_code;
    if (deps) {
        DependencyGraph g = spheres_overlap(model->model);
        for (const auto& e : g.edges) {
            std::vector<std::string> shared(e.shared.begin(), e.shared.end());
            if (s.format == Format::Machine) {
                s.out << nlohmann::json{{"a", e.a}, {"b", e.b}, {"shared", shared}}.dump() << '\n';
            } else {
                s.out << e.a << " -- " << e.b << "  [";
                for (std::size_t i = 0; i < shared.size(); ++i) s.out << (i ? ", " : "") << shared[i];
                s.out << "]\n";
            }
        }
    }
    if (classes) {
        FlatClassModel flat = flatten(model->model);
        for (const auto& c : flat.classes) {
            if (s.format == Format::Machine) {
                nlohmann::json attrs = nlohmann::json::array();
                for (const auto& a : c.attributes) {
                    attrs.push_back({{"name", a.name}, {"section", a.section}, {"type", a.type}});
                }
                s.out << nlohmann::json{{"attributes", attrs},
                                        {"operations", c.operations},
                                        {"role", std::string(to_string(c.role))},
                                        {"stereotype", c.stereotype},
                                        {"title", c.title}}
                             .dump()
                      << '\n';
            } else {
                s.out << c.title << " <<" << c.stereotype << ">>\n";
                for (const auto& a : c.attributes) s.out << "  " << a.section << " " << a.name << ": " << a.type << '\n';
                for (const auto& op : c.operations) s.out << "  " << op << "()\n";
            }
        }
    }
    return kExitOk;
}

struct RunArgs {
    std::string file;
    std::optional<std::uint64_t> ticks;
    std::uint64_t seed = 0;
    std::string script;
    bool interactive = false;
    bool transcript = false;
};

int do_run(Session& s, const RunArgs& a) {
    auto compiled = load_model(s, a.file);
    if (!compiled) return s.outcome.exit_code;
    const ModelSpec& model = compiled->model;

    if (a.interactive || a.transcript) {
        if (auto why = chat_incompatibility(model)) {
            return s.fail(kExitDiagnostics, "E-NOT-CHAT", "model cannot run as a chat: " + *why, a.file);
        }
    }
    try {
        if (a.interactive) {
            ChatRun run = run_chat_interactive(model, s.in, s.out, a.seed);
            if (a.transcript) print_transcript(s, run.transcript);
            return kExitOk;
        }

        std::string text;
        if (!a.script.empty()) {
            auto contents = read_file(a.script);
            if (!contents) return s.fail(kExitIo, "E-IO", "cannot read script '" + a.script + "'", a.script);
            text = std::move(*contents);
        }

        if (a.transcript) {
            ChatScript script = parse_chat_script(text, model);
            s.emit_all(script.report, a.script);
            if (!script.report.passes()) return kExitDiagnostics;
            print_transcript(s, run_chat_script(model, script.events, a.seed).transcript);
            return kExitOk;
        }

        StimulusScript script = parse_stimulus_script(text, model, a.script);
        s.emit_all(script.report, a.script);
        if (!script.report.passes()) return kExitDiagnostics;
        EpisodeConfig config;
        config.seed = a.seed;
        config.stimuli = script.stimuli;
        if (a.ticks) {
            config.ticks = *a.ticks;
        } else if (!script.stimuli.empty()) {
            config.ticks = script.stimuli.back().tick + 1;
        }
        Trace trace = run_episode(model, config);
        s.out << (s.format == Format::Machine ? serialize(trace) : render_text(trace));
    } catch (const ModelError& e) {
        return s.fail(kExitDiagnostics, e.code(), e.what(), a.file);
    }
    return kExitOk;
}

}  // namespace

CommandOutcome run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                           std::istream& in, const CommandOptions& options) {
    Session s{out, err, in, options, Format::Text, {}};

    CLI::App app{"Multi-agent model compiler and runner", "masforge"};
    app.require_subcommand(1);
    std::string format = "text";
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "machine"}));
    };
    add_format(&app);

    std::string file;
    auto* validate = app.add_subcommand("validate", "Check a model and print its diagnostics");
    validate->add_option("file", file, "Model file")->required();
    add_format(validate);

    std::string out_dir;
    std::string profile = "self";
    auto* gen = app.add_subcommand("generate", "Write the project scaffold of a model");
    gen->add_option("file", file, "Model file")->required();
    gen->add_option("--out", out_dir, "Output directory")->required();
    gen->add_option("--profile", profile, "Template profile");
    add_format(gen);

    bool deps = false;
    bool classes = false;
    auto* inspect = app.add_subcommand("inspect", "Show derived views of a model");
    inspect->add_option("file", file, "Model file")->required();
    inspect->add_flag("--deps", deps, "Agents whose spheres of influence overlap");
    inspect->add_flag("--classes", classes, "Flattened class model");
    add_format(inspect);

    RunArgs run_args;
    std::uint64_t ticks = 0;
    auto* run = app.add_subcommand("run", "Execute a model and print its trace");
    run->add_option("file", run_args.file, "Model file")->required();
    auto* ticks_opt = run->add_option("--ticks", ticks, "Number of ticks");
    run->add_option("--seed", run_args.seed, "Random seed");
    auto* script_opt = run->add_option("--script", run_args.script, "Stimulus or chat script");
    auto* interactive_opt = run->add_flag("--interactive", run_args.interactive, "Chat from the terminal");
    script_opt->excludes(interactive_opt);
    run->add_flag("--transcript", run_args.transcript, "Print the chat transcript instead of the trace");
    add_format(run);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return s.outcome;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return s.outcome;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        s.outcome.diagnostics.push_back(e.what());
        s.outcome.exit_code = kExitUsage;
        return s.outcome;
    }
    s.format = format == "machine" ? Format::Machine : Format::Text;

    if (validate->parsed()) {
        do_validate(s, file);
    } else if (gen->parsed()) {
        do_generate(s, file, out_dir, profile);
    } else if (inspect->parsed()) {
        if (!deps && !classes) {
            err << "inspect: give --deps or --classes\n";
            s.outcome.exit_code = kExitUsage;
            return s.outcome;
        }
        do_inspect(s, file, deps, classes);
    } else if (run->parsed()) {
        if (ticks_opt->count() > 0) run_args.ticks = ticks;
        do_run(s, run_args);
    }
    return s.outcome;
}

}  // namespace masforge
