#include <gtest/gtest.h>

#include <fstream>

#include "masforge/modelc/scaffold.hpp"
#include "testkit.hpp"

using namespace masforge;
namespace fs = std::filesystem;

namespace {

ModelSpec chat() {
    return testkit::load_model(testkit::models_dir() / "chat.mas");
}

std::size_t count_prefix(const ScaffoldPlan& plan, std::string_view prefix) {
    std::size_t n = 0;
    for (const auto& f : plan.files) n += f.path.rfind(prefix, 0) == 0;
    return n;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string body(const std::string& text, const std::string& region) {
    for (const auto& r : find_regions(text)) {
        if (r.name == region) return text.substr(r.body_begin, r.body_end - r.body_begin);
    }
    return "<missing>";
}

}  // namespace

TEST(Template, SubstitutesAndLoops) {
    TemplateScope scope;
    scope.values["who"] = "world";
    TemplateScope a;
    a.values["x"] = "1";
    TemplateScope b;
    b.values["x"] = "2";
    scope.lists["items"] = {a, b};
    EXPECT_EQ(render_template("hi {{who}}:{{#each items}} {{x}}{{who}}{{/each}}", scope), "hi world: 1world 2world");
    EXPECT_EQ(template_names("{{a}} {{#each l}}{{b}}{{a}}{{/each}}"), (std::vector<std::string>{"a", "l", "b"}));
}

TEST(Template, UnknownPlaceholder) {
    try {
        render_template("{{nope}}", {});
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_EQ(e.code(), "E-TEMPLATE");
    }
    EXPECT_THROW(render_template("{{#each l}}x", {}), ModelError);
}

TEST(PimToPsm, ChatModelHasThreeAgentStubs) {
    ScaffoldPlan plan = pim_to_psm(chat());
    EXPECT_EQ(count_prefix(plan, "core/agents/"), 3u);
    EXPECT_NE(plan.find("core/agents/Alice.cpp"), nullptr);
    EXPECT_NE(plan.find("core/environment/ChatRoom.cpp"), nullptr);
    EXPECT_NE(plan.find("CMakeLists.txt"), nullptr);
    EXPECT_NE(plan.find("README.md"), nullptr);
    EXPECT_NE(plan.find("model/Chat.mas"), nullptr);
    for (std::size_t i = 1; i < plan.files.size(); ++i) EXPECT_LT(plan.files[i - 1].path, plan.files[i].path);
}

TEST(PimToPsm, EnvironmentOnlyModel) {
    ModelSpec m =
        testkit::model_of("model Solo\nenvironment Void { deterministic: true static: true continuous: false }\n");
    ScaffoldPlan plan = pim_to_psm(m);
    EXPECT_EQ(count_prefix(plan, "core/agents/"), 0u);
    EXPECT_NE(plan.find("core/environment/Void.cpp"), nullptr);
    EXPECT_NE(plan.find("CMakeLists.txt"), nullptr);
    EXPECT_NE(plan.find("README.md"), nullptr);
}

TEST(PimToPsm, IsPure) {
    EXPECT_EQ(pim_to_psm(chat()), pim_to_psm(chat()));
    EXPECT_EQ(plan_digest(pim_to_psm(chat())), plan_digest(pim_to_psm(chat())));
}

TEST(PimToPsm, UnknownProfile) {
    try {
        pim_to_psm(chat(), "java");
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_EQ(e.code(), "E-NO-PROFILE");
    }
}

TEST(PimToPsm, RejectsInvalidModel) {
    auto bad = testkit::compile_text("model M\nenvironment E { deterministic: true static: true continuous: false "
                                     "state x: int = 0 }\nagent R: reactive { beliefs { x = 1 } }\n");
    EXPECT_THROW(pim_to_psm(bad.model), ModelError);
}

TEST(PimToPsm, EveryOperationIsStubbedOnce) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        ModelSpec m = testkit::model_of(testkit::random_model(seed));
        ScaffoldPlan plan = pim_to_psm(m);
        FlatClassModel flat = flatten(m);
        for (const auto& c : flat.classes) {
            if (c.role != FlatClassRole::Agent) continue;
            const ScaffoldFile* f = plan.find("core/agents/" + c.title + ".cpp");
            ASSERT_NE(f, nullptr);
            for (const auto& op : c.operations) {
                std::string stub = "void " + op + "() {";
                std::size_t first_at = f->contents.find(stub);
                EXPECT_NE(first_at, std::string::npos) << c.title << "." << op;
                EXPECT_EQ(f->contents.find(stub, first_at + 1), std::string::npos) << c.title << "." << op;
            }
        }
    }
}

TEST(PimToPsm, CanonicalModelCopyReparsesToTheSameModel) {
    ModelSpec m = chat();
    ScaffoldPlan plan = pim_to_psm(m);
    ModelSpec copy = testkit::model_of(plan.find("model/Chat.mas")->contents);
    EXPECT_EQ(copy, m);
}

TEST(Regions, FindAndMerge) {
    std::string fresh = "a\n// <masforge:keep r1>\n// </masforge:keep>\nb\n// <masforge:keep r2>\n// </masforge:keep>\n";
    std::string old = "x\n// <masforge:keep r2>\nkeep me\n// </masforge:keep>\n"
                      "// <masforge:keep gone>\nlost\n// </masforge:keep>\n";
    auto merged = merge_regions(fresh, old);
    EXPECT_EQ(body(merged.contents, "r2"), "keep me\n");
    EXPECT_EQ(body(merged.contents, "r1"), "");
    EXPECT_EQ(merged.carried, 1u);
    EXPECT_EQ(merged.dropped, std::vector<std::string>{"gone"});
    EXPECT_EQ(merged.contents.substr(0, 2), "a\n");
}

TEST(Regions, MalformedMarkers) {
    EXPECT_THROW(find_regions("// <masforge:keep a>\n"), ModelError);
    EXPECT_THROW(find_regions("// </masforge:keep>\n"), ModelError);
    EXPECT_THROW(find_regions("// <masforge:keep a>\n// <masforge:keep b>\n// </masforge:keep>\n"), ModelError);
    EXPECT_THROW(find_regions("// <masforge:keep a>\n// </masforge:keep>\n// <masforge:keep a>\n// </masforge:keep>\n"),
                 ModelError);
}

TEST(Generate, FreshDirectory) {
    testkit::TempDir dir("fresh");
    ScaffoldPlan plan = pim_to_psm(chat());
    WriteReport r = generate(plan, dir.path());
    EXPECT_EQ(r.created.size(), plan.files.size());
    EXPECT_EQ(r.preserved, 0u);
    EXPECT_TRUE(r.orphans.empty());
    for (const auto& f : plan.files) EXPECT_EQ(testkit::read_text(dir.path() / f.path), f.contents);
    EXPECT_FALSE(fs::exists(dir.path() / kLockFile));
    EXPECT_FALSE(fs::exists(dir.path() / kStagingDir));
}

TEST(Generate, EditInsideRegionSurvives) {
    testkit::TempDir dir("edit");
    ScaffoldPlan plan = pim_to_psm(chat());
    generate(plan, dir.path());
    fs::path alice = dir.path() / "core/agents/Alice.cpp";
    std::string text = testkit::read_text(alice);
    std::string marker = "// <masforge:keep Alice.act>\n";
    std::size_t at = text.find(marker);
    ASSERT_NE(at, std::string::npos);
    std::string edit = "        send_all();  // hand written\n";
    text.insert(at + marker.size(), edit);
    std::string outside = "// stray outside edit\n";
    write(alice, outside + text);

    WriteReport r = generate(plan, dir.path());
    std::string after = testkit::read_text(alice);
    EXPECT_EQ(body(after, "Alice.act"), edit + "        ");
    EXPECT_EQ(after.find(outside), std::string::npos);
    EXPECT_EQ(r.updated, std::vector<std::string>{"core/agents/Alice.cpp"});
    EXPECT_GE(r.preserved, 1u);
}

TEST(Generate, SecondRunIsUnchanged) {
    testkit::TempDir dir("twice");
    ScaffoldPlan plan = pim_to_psm(chat());
    generate(plan, dir.path());
    std::string before = testkit::tree_hash(dir.path());
    WriteReport r = generate(plan, dir.path());
    EXPECT_EQ(r.unchanged.size(), plan.files.size());
    EXPECT_TRUE(r.created.empty());
    EXPECT_EQ(testkit::tree_hash(dir.path()), before);
}

TEST(Generate, RenamedAgentLeavesAnOrphan) {
    testkit::TempDir dir("orphan");
    std::string text = testkit::read_text(testkit::models_dir() / "chat.mas");
    generate(pim_to_psm(testkit::model_of(text)), dir.path());
    std::string renamed = text;
    for (std::size_t at; (at = renamed.find("Carol")) != std::string::npos;) renamed.replace(at, 5, "Chloe");
    WriteReport r = generate(pim_to_psm(testkit::model_of(renamed)), dir.path());
    EXPECT_EQ(r.orphans, std::vector<std::string>{"core/agents/Carol.cpp"});
    EXPECT_TRUE(fs::exists(dir.path() / "core/agents/Carol.cpp"));
    EXPECT_TRUE(fs::exists(dir.path() / "core/agents/Chloe.cpp"));
}

TEST(Generate, HeldLockFails) {
    testkit::TempDir dir("lock");
    write(dir.path() / kLockFile, "");
    try {
        generate(pim_to_psm(chat()), dir.path());
        FAIL();
    } catch (const GenerateError& e) {
        EXPECT_EQ(e.code(), "E-LOCKED");
    }
    EXPECT_FALSE(fs::exists(dir.path() / "README.md"));
}

TEST(Generate, BrokenMarkersLeaveTreeUntouched) {
    testkit::TempDir dir("markers");
    ScaffoldPlan plan = pim_to_psm(chat());
    generate(plan, dir.path());
    write(dir.path() / "core/agents/Bob.cpp", "// <masforge:keep Bob.act>\nunclosed\n");
    std::string before = testkit::tree_hash(dir.path());
    try {
        generate(plan, dir.path());
        FAIL();
    } catch (const GenerateError& e) {
        EXPECT_EQ(e.code(), "E-MARKERS");
        EXPECT_TRUE(e.path().ends_with("core/agents/Bob.cpp")) << e.path();
    }
    EXPECT_EQ(testkit::tree_hash(dir.path()), before);
}

TEST(Generate, UnwritableTarget) {
    testkit::TempDir dir("io");
    write(dir.path() / "blocker", "file, not a directory");
    try {
        generate(pim_to_psm(chat()), dir.path() / "blocker");
        FAIL();
    } catch (const GenerateError& e) {
        EXPECT_EQ(e.code(), "E-IO");
    }
}
