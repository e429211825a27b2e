#include <gtest/gtest.h>

#include <random>

#include "cuaplan/fides/fides.hpp"
#include "cuaplan/harness/runner.hpp"
#include "harness_support.hpp"
#include "fides_support.hpp"
#include "runtime_support.hpp"

namespace {

using namespace cuaplan;
using runtime::Outcome;
using runtime::Value;

env::Scenario trivial_scenario() {
    return env::scenario_from_json(nlohmann::json::parse(R"({
      "schema_version": 1, "id": "trivial", "initial_frame": "d",
      "frames": [{"id": "d", "kind": "desktop", "description": "An empty desktop."}],
      "goal": {"frame": "d"}
    })"));
}

fides::FidesResult run(const std::vector<std::string>& turns, oracles::PerceptionPtr perception = nullptr,
                       fides::FidesOptions opts = {}, const env::Scenario& s = trivial_scenario()) {
    if (!perception) perception = std::make_shared<oracles::BenignPerception>();
    tools::EnvBroker broker(env::load_scenario(s), perception);
    testkit::ListPlanner planner(turns);
    return fides::fides_run(s.task, planner, broker, opts);
}

std::vector<std::string> repeat(const std::string& stmt, int n) { return std::vector<std::string>(n, stmt); }

TEST(Fides, TwoTurnSuccess) {
    auto r = run({"s = summarize_screenshot_content(Instruction(text=\"what is on screen\", length=100))", "mark_done()"});
    EXPECT_EQ(r.record.outcome, Outcome::Success) << testkit::describe(r.record);
    EXPECT_EQ(r.record.turns, 2);
    ASSERT_EQ(r.transcript.turns.size(), 2u);
    EXPECT_EQ(r.transcript.turns[0].shown, "<VAR1: redacted>");
    ASSERT_EQ(r.planner_views.size(), 2u);
    EXPECT_EQ(r.planner_views[0], "");
}

TEST(Fides, SixthReferenceExceedsTheReuseCap) {
    std::vector<std::string> turns = {"s = summarize_screenshot_content(Instruction(text=\"screen\", length=50))"};
    for (int i = 1; i <= 6; ++i) {
        turns.push_back("v" + std::to_string(i) + " = verify_hypothesis(observation=s.text, hypothesis=\"desktop\")");
    }
    turns.push_back("mark_done()");
    auto r = run(turns);
    EXPECT_EQ(r.record.outcome, Outcome::ReuseExceeded) << testkit::describe(r.record);
    EXPECT_EQ(r.record.turns, 7);
    EXPECT_EQ(testkit::events_of(r.record, runtime::EventKind::ToolCall, "verify_hypothesis").size(), 5u);
    EXPECT_NE(r.record.detail.find("'s' referenced 6 times"), std::string::npos) << r.record.detail;
}

TEST(Fides, ReassignmentRestartsTheCount) {
    const std::string assign = "s = summarize_screenshot_content(Instruction(text=\"screen\", length=50))";
    std::vector<std::string> turns = {assign};
    for (int i = 0; i < 5; ++i) turns.push_back("v = verify_hypothesis(observation=s.text, hypothesis=\"desktop\")");
    turns.push_back(assign);
    for (int i = 0; i < 5; ++i) turns.push_back("v = verify_hypothesis(observation=s.text, hypothesis=\"desktop\")");
    turns.push_back("mark_done()");
    auto r = run(turns);
    EXPECT_EQ(r.record.outcome, Outcome::Success) << testkit::describe(r.record);
}

TEST(Fides, TrustedLiteralsAreNotCapped) {
    std::vector<std::string> turns = {"x = 3"};
    for (int i = 0; i < 8; ++i) turns.push_back("y = x");
    turns.push_back("mark_done()");
    auto r = run(turns);
    EXPECT_EQ(r.record.outcome, Outcome::Success);
    EXPECT_EQ(r.transcript.turns[0].shown, "3");
}

TEST(Fides, SeventyFirstTurnIsRefused) {
    auto r = run(repeat("no_op()", 71));
    EXPECT_EQ(r.record.label(), "BUDGET_EXHAUSTED(max_turn)");
    EXPECT_EQ(r.record.turns, 70);
}

TEST(Fides, SixteenthGuiStepExhaustsTheBudget) {
    auto r = run(repeat("left_single((0.5, 0.5), \"click\")", 16));
    EXPECT_EQ(r.record.label(), "BUDGET_EXHAUSTED(max_gui_steps)");
    EXPECT_EQ(r.record.gui_steps, 15);
}

TEST(Fides, BadTurnIsPlanError) {
    EXPECT_EQ(run({"delete_all_files()"}).record.outcome, Outcome::PlanError);
    EXPECT_EQ(run({"if True:\n    no_op()"}).record.outcome, Outcome::PlanError);
    EXPECT_EQ(run({"x = ("}).record.outcome, Outcome::PlanError);
}

TEST(Redact, Examples) {
    EXPECT_TRUE(fides::redact({}, true).turns.empty());
    Value coord = Value::coord(env::Coord{0.25, 0.75}, {1});
    Value flag = Value::boolean(true, {1});
    std::vector<fides::HistoryEntry> h = {{"r = find(...)", "r", coord}, {"ok = r.status == \"OK\"", "ok", flag},
                                          {"no_op()", "", std::nullopt}};
    auto on = fides::redact(h, true);
    EXPECT_EQ(on.turns[0].shown, "<VAR1: redacted>");
    EXPECT_EQ(on.turns[1].shown, "True");
    EXPECT_EQ(on.turns[2].shown, "");
    auto off = fides::redact(h, false);
    EXPECT_EQ(off.turns[1].shown, "<VAR2: redacted>");
    EXPECT_EQ(off.render(), "[1] r = find(...)\n    -> <VAR1: redacted>\n[2] ok = r.status == \"OK\"\n    -> "
                            "<VAR2: redacted>\n[3] no_op()\n");
    EXPECT_EQ(off.to_json()["turns"].size(), 3u);
}

TEST(Fides, RelaxationShowsQuarantinedBooleans) {
    fides::FidesOptions on, off;
    off.relaxation = false;
    auto a = run(testkit::probe_turns(), nullptr, on, testkit::scenario_fixture("benign/natural_products.json"));
    auto b = run(testkit::probe_turns(), nullptr, off, testkit::scenario_fixture("benign/natural_products.json"));
    const auto& shown_on = a.transcript.turns.at(2).shown;
    EXPECT_TRUE(shown_on == "True" || shown_on == "False") << shown_on;
    EXPECT_EQ(b.transcript.turns.at(2).shown.rfind("<VAR", 0), 0u);
}

// No fuzzed payload text of four or more characters and no payload number
// ever reaches what the planner sees.
TEST(Fides, LeakFreedomOverFuzzedPayloads) {
    std::size_t payloads = 0;
    for (std::uint64_t seed = 0; payloads < 500; ++seed) {
        auto p = std::make_shared<testkit::PayloadPerception>(seed);
        fides::FidesOptions opts;
        opts.relaxation = seed % 2 == 0;
        auto r = run(testkit::probe_turns(), p, opts, testkit::scenario_fixture("benign/natural_products.json"));
        std::string seen;
        for (const auto& v : r.planner_views) seen += v;
        seen += r.transcript.render();
        const auto leaked = testkit::leaks(*p, seen);
        ASSERT_TRUE(leaked.empty()) << "seed " << seed << ": " << leaked.front();
        payloads += p->texts.size() + p->numbers.size();
    }
    EXPECT_GE(payloads, 500u);
}

TEST(Fides, WithoutRelaxationTranscriptsIgnorePayloads) {
    fides::FidesOptions off;
    off.relaxation = false;
    const auto s = testkit::scenario_fixture("benign/natural_products.json");
    auto base = run(testkit::probe_turns(), std::make_shared<testkit::PayloadPerception>(1), off, s);
    for (std::uint64_t seed = 2; seed < 20; ++seed) {
        auto other = run(testkit::probe_turns(), std::make_shared<testkit::PayloadPerception>(seed), off, s);
        EXPECT_EQ(other.transcript.render(), base.transcript.render());
        EXPECT_EQ(other.planner_views, base.planner_views);
    }
}

TEST(Fides, ScriptedTurnsCompleteEveryBenignTask) {
    for (const auto& e : testkit::all_benign()) {
        auto spec = testkit::spec_for(e);
        spec.executor = harness::Executor::Fides;
        auto r = harness::run_one(spec);
        EXPECT_EQ(r.outcome, Outcome::Success) << e.id << " " << r.label();
        EXPECT_LE(r.turns, 70);
    }
}

}  // namespace
