#include <gtest/gtest.h>

#include "cuaplan/oracles/planner.hpp"
#include "cuaplan/plan/call_sites.hpp"
#include "cuaplan/plan/parser.hpp"
#include "cuaplan/runtime/interpreter.hpp"
#include "cuaplan/tools/manifest.hpp"
#include "cuaplan/tools/toolset.hpp"
#include "cuaplan/util/files.hpp"
#include "harness_support.hpp"

namespace {

using namespace cuaplan;

struct Case {
    std::string name;
    std::string text;
    harness::SuiteEntry entry;
};

// Every library plan against its own task, plus the standalone plan files
// against the natural-products task.
std::vector<Case> all_cases() {
    std::vector<Case> out;
    oracles::ScriptedPlanner planner(oracles::planner_library_dir());
    for (const auto& e : testkit::all_benign()) {
        const auto& lib = planner.library(e.scenario.id);
        for (std::size_t i = 0; i < lib.plans.size(); ++i) {
            out.push_back({e.scenario.id + "#" + std::to_string(i), lib.plans[i], e});
        }
    }
    const auto np = testkit::benign_entry("natural_products.json");
    // natural_products_g2_original uses an f-string and is rejected by the parser.
    for (const char* f : {"cookie_snippet_g3", "natural_products_g1", "natural_products_g2"}) {
        out.push_back({f, testkit::fixture_text(std::string("plans/") + f + ".plan"), np});
    }
    return out;
}

// Adversarial answers can steer data but never which call site runs.
TEST(ControlFlowIntegrity, AdversarialPerceptionStaysInsideCallSites) {
    const auto whitelist = tools::ToolManifest::builtin().names();
    const auto cases = all_cases();
    ASSERT_GE(cases.size(), 20u);
    for (const auto& c : cases) {
        const auto program = plan::parse_plan(c.text);
        const auto sites = plan::enumerate_call_sites(program);
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            tools::EnvBroker inner(env::load_scenario(c.entry.scenario),
                                   std::make_shared<oracles::AdversarialPerception>(seed));
            testkit::RecordingBroker broker(inner);
            const auto parses = plan::parse_invocations();
            auto r = runtime::execute_plan(program, broker);
            EXPECT_EQ(plan::parse_invocations(), parses) << c.name;
            for (const auto& n : broker.names) EXPECT_TRUE(whitelist.count(n)) << c.name << " " << n;
            for (const auto& e : r.trace.events()) {
                if (e.kind != runtime::EventKind::ToolCall) continue;
                EXPECT_TRUE(sites.contains(e.callee, e.site)) << c.name << " seed " << seed << ": " << e.callee
                                                              << " at " << e.site;
            }
        }
    }
}

TEST(ToolManifest, AssetFileMatchesBuiltin) {
    EXPECT_EQ(read_json_file(testkit::fixture("../assets/tool_manifest.json")),
              tools::ToolManifest::builtin().to_json());
}

}  // namespace
