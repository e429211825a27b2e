#include <gtest/gtest.h>

#include <algorithm>

#include "cuaplan/plan/call_sites.hpp"
#include "runtime_support.hpp"

namespace {

using namespace cuaplan;
using runtime::EventKind;
using runtime::Outcome;
using runtime::Value;
using testkit::describe;
using testkit::run_benign;
using testkit::scenario_fixture;

env::Scenario trivial_scenario() {
    return env::scenario_from_json(nlohmann::json::parse(R"({
      "schema_version": 1, "id": "trivial", "initial_frame": "d",
      "frames": [{"id": "d", "kind": "desktop", "description": "An empty desktop."}],
      "goal": {"frame": "d"}
    })"));
}

std::vector<const runtime::TraceEvent*> calls_of(const runtime::RunRecord& r, const std::string& callee = "") {
    std::vector<const runtime::TraceEvent*> out;
    for (const auto& e : r.trace.events()) {
        if (e.kind == EventKind::ToolCall && (callee.empty() || e.callee == callee)) out.push_back(&e);
    }
    return out;
}

TEST(ExecutePlan, MarkDoneOnSatisfiedGoal) {
    auto r = run_benign("mark_done()\n", trivial_scenario());
    EXPECT_EQ(r.outcome, Outcome::Success) << describe(r);
    EXPECT_EQ(calls_of(r).size(), 1u);
}

TEST(ExecutePlan, MarkDoneWithoutGoalFails) {
    auto s = trivial_scenario();
    s.goal = env::Goal::from_json({{"frame", "elsewhere"}});
    auto r = run_benign("mark_done()\n", s);
    EXPECT_EQ(r.outcome, Outcome::Fail);
}

TEST(ExecutePlan, PlanEndingWithoutTerminalFails) {
    auto r = run_benign("x = 1\n", trivial_scenario());
    EXPECT_EQ(r.outcome, Outcome::Fail);
    EXPECT_EQ(r.detail, "plan ended without mark_done");
}

TEST(ExecutePlan, NaturalProductsG1Succeeds) {
    auto r = run_benign(testkit::fixture_text("plans/natural_products_g1.plan"), scenario_fixture("benign/natural_products.json"));
    ASSERT_EQ(r.outcome, Outcome::Success) << describe(r);
    auto verifies = calls_of(r, "verify_hypothesis");
    EXPECT_TRUE(std::any_of(verifies.begin(), verifies.end(), [](auto* e) { return e->status == "OK"; }));
    EXPECT_TRUE(r.visited("search_results"));
    EXPECT_EQ(r.final_frame, "np_target");
    EXPECT_LE(r.tool_calls, 70);
    EXPECT_LE(r.gui_steps, 15);
}

TEST(ExecutePlan, ToolResultsAreQuarantined) {
    auto r = run_benign(testkit::fixture_text("plans/natural_products_g1.plan"), scenario_fixture("benign/natural_products.json"));
    for (const char* name : {"summary", "in_website", "cookie_try", "sres", "fres", "final_text", "done_check"}) {
        ASSERT_TRUE(r.bindings.count(name)) << name;
        EXPECT_FALSE(r.bindings.at(name).trusted()) << name;
    }
    // Literal-only bindings stay trusted even after many calls.
    EXPECT_TRUE(r.bindings.at("def_cookie_descriptions").trusted());
    // Flags assigned inside a quarantined branch are literals, hence trusted.
    EXPECT_TRUE(r.bindings.at("cookie_found").trusted());
}

TEST(ExecutePlan, CallEventsStayInsideCallSites) {
    auto program = plan::parse_plan(testkit::fixture_text("plans/natural_products_g1.plan"));
    auto sites = plan::enumerate_call_sites(program);
    auto r = run_benign(testkit::fixture_text("plans/natural_products_g1.plan"), scenario_fixture("benign/natural_products.json"));
    for (auto* e : calls_of(r)) EXPECT_TRUE(sites.contains(e->callee, e->site)) << e->callee << " " << e->site;
}

TEST(ExecutePlan, NoParsingDuringExecution) {
    auto program = plan::parse_plan(testkit::fixture_text("plans/natural_products_g1.plan"));
    tools::EnvBroker broker(env::load_scenario(scenario_fixture("benign/natural_products.json")),
                            std::make_shared<oracles::BenignPerception>());
    auto before = plan::parse_invocations();
    runtime::execute_plan(program, broker);
    EXPECT_EQ(plan::parse_invocations(), before);
}

TEST(ExecutePlan, TraceIsDeterministic) {
    auto a = run_benign(testkit::fixture_text("plans/natural_products_g1.plan"), scenario_fixture("benign/natural_products.json"));
    auto b = run_benign(testkit::fixture_text("plans/natural_products_g1.plan"), scenario_fixture("benign/natural_products.json"));
    EXPECT_EQ(a.trace.digest(), b.trace.digest());
    EXPECT_EQ(a.final_env_digest, b.final_env_digest);
    auto ids = a.trace.events();
    for (std::size_t i = 1; i < ids.size(); ++i) EXPECT_LT(ids[i - 1].id, ids[i].id);
}

TEST(ExecutePlan, TraceRoundTripsThroughJsonl) {
    auto a = run_benign(testkit::fixture_text("plans/natural_products_g1.plan"), scenario_fixture("benign/natural_products.json"));
    auto back = runtime::Trace::from_jsonl(a.trace.to_jsonl());
    EXPECT_EQ(back.digest(), a.trace.digest());
}

TEST(ExecutePlan, PlanErrors) {
    auto s = trivial_scenario();
    EXPECT_EQ(run_benign("if missing:\n    mark_done()\n", s).outcome, Outcome::PlanError);
    auto r = run_benign("s = summarize_screenshot_content(Instruction(text=\"x\"))\nif s.text:\n    mark_done()\n", s);
    EXPECT_EQ(r.outcome, Outcome::PlanError);
    EXPECT_NE(r.detail.find("bool"), std::string::npos);
    r = run_benign("d = check_done(\"x\")\nif d.status == \"OK\":\n    mark_done()\n", s);
    EXPECT_EQ(r.outcome, Outcome::PlanError);
    EXPECT_NE(r.detail.find("no field 'status'"), std::string::npos);
    r = run_benign("delete_all_files()\n", s);
    EXPECT_EQ(r.outcome, Outcome::PlanError);
    EXPECT_TRUE(calls_of(r).empty());
}

TEST(EvalGuard, StatusComparisonIsQuarantined) {
    runtime::Record rec;
    rec.set("status", Value::text("OK", {3}));
    runtime::Bindings b = {{"r", Value::record(rec, {3})}};
    Value v = runtime::eval_guard(plan::parse_plan("r.status == \"OK\"\n").statements[0].as<plan::ExprStmt>()->expr, b);
    EXPECT_EQ(v, Value::boolean(true, {3}));
}

TEST(EvalGuard, NoneCheckOnTrustedNone) {
    runtime::Bindings b = {{"x", Value::none()}};
    Value v = runtime::eval_guard(plan::parse_plan("x is None\n").statements[0].as<plan::ExprStmt>()->expr, b);
    EXPECT_EQ(v, Value::boolean(true));
}

// Exhaustive truth table over (value, provenance) pairs for and/or/not.
TEST(EvalGuard, ProvenanceJoinTruthTable) {
    const std::vector<Value> operands = {Value::boolean(true), Value::boolean(false), Value::boolean(true, {7}),
                                         Value::boolean(false, {7})};
    for (const auto& a : operands) {
        for (const auto& b : operands) {
            runtime::Bindings env = {{"a", a}, {"b", b}};
            bool av = *a.as_bool();
            bool bv = *b.as_bool();
            auto expr = [](const char* src) { return plan::parse_plan(src).statements[0].as<plan::ExprStmt>()->expr; };

            // and: b is only read when a is true.
            runtime::Provenance and_prov = av ? runtime::join(a.prov, b.prov) : a.prov;
            EXPECT_EQ(runtime::eval_guard(expr("a and b\n"), env), Value::boolean(av && bv, and_prov));
            runtime::Provenance or_prov = av ? a.prov : runtime::join(a.prov, b.prov);
            EXPECT_EQ(runtime::eval_guard(expr("a or b\n"), env), Value::boolean(av || bv, or_prov));
            EXPECT_EQ(runtime::eval_guard(expr("not a\n"), env), Value::boolean(!av, a.prov));
        }
    }
    // The documented case: TRUSTED true and QUARANTINED false.
    runtime::Bindings env = {{"a", Value::boolean(true)}, {"b", Value::boolean(false, {2})}};
    auto v = runtime::eval_guard(plan::parse_plan("a and b\n").statements[0].as<plan::ExprStmt>()->expr, env);
    EXPECT_FALSE(*v.as_bool());
    EXPECT_FALSE(v.trusted());
}

TEST(EvalGuard, NonBooleanIsPlanError) {
    runtime::Bindings b = {{"t", Value::text("OK")}};
    EXPECT_THROW(runtime::eval_guard(plan::parse_plan("t\n").statements[0].as<plan::ExprStmt>()->expr, b),
                 runtime::PlanError);
}

std::string repeat(const std::string& line, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += line;
    return out;
}

TEST(Budgets, SixteenthClickExhaustsGuiSteps) {
    auto r = run_benign(repeat("left_single((0.5, 0.5))\n", 16), trivial_scenario());
    EXPECT_EQ(r.outcome, Outcome::BudgetExhausted) << describe(r);
    EXPECT_EQ(r.label(), "BUDGET_EXHAUSTED(max_gui_steps)");
    EXPECT_EQ(calls_of(r).size(), 15u);
    EXPECT_EQ(r.gui_steps, 15);
}

TEST(Budgets, SeventyFirstCallExhaustsToolCalls) {
    auto r = run_benign(repeat("verify_hypothesis(\"a\", \"a\")\n", 71), trivial_scenario());
    EXPECT_EQ(r.label(), "BUDGET_EXHAUSTED(max_tool_calls)");
    EXPECT_EQ(calls_of(r).size(), 70u);
    r = run_benign(repeat("verify_hypothesis(\"a\", \"a\")\n", 70) + "no_op()\n", trivial_scenario());
    EXPECT_EQ(r.outcome, Outcome::Fail);
}

TEST(Budgets, NoOpIsFree) {
    runtime::Budgets tight{1, 1, std::nullopt};
    auto r = run_benign("no_op()\n", trivial_scenario(), tight);
    EXPECT_EQ(r.outcome, Outcome::Fail);
    EXPECT_EQ(r.detail, "plan ended without mark_done");
    EXPECT_EQ(r.tool_calls, 0);

    r = run_benign("wait()\nmark_done()\n", trivial_scenario(), tight);
    EXPECT_EQ(r.label(), "BUDGET_EXHAUSTED(max_tool_calls)");
    EXPECT_EQ(r.gui_steps, 0);
}

TEST(Budgets, WallLimitCountsStatements) {
    runtime::Budgets b{15, 70, 2};
    auto r = run_benign("x = 1\ny = 2\nmark_done()\n", trivial_scenario(), b);
    EXPECT_EQ(r.label(), "BUDGET_EXHAUSTED(wall_limit)");
    EXPECT_THROW((runtime::BudgetMeter(runtime::Budgets{0, 70, std::nullopt})), std::invalid_argument);
}

TEST(Budgets, MeterChargesBeforeCall) {
    runtime::BudgetMeter m(runtime::Budgets{1, 2, std::nullopt});
    const auto& man = tools::ToolManifest::builtin();
    EXPECT_EQ(m.charge(*man.find("left_single")), runtime::Exhaustion::None);
    EXPECT_EQ(m.charge(*man.find("type_text")), runtime::Exhaustion::GuiSteps);
    EXPECT_EQ(m.charge(*man.find("wait")), runtime::Exhaustion::None);
    EXPECT_EQ(m.charge(*man.find("wait")), runtime::Exhaustion::ToolCalls);
    EXPECT_EQ(m.charge(*man.find("no_op")), runtime::Exhaustion::None);
}

TEST(Print, LoggedToTraceWithProvenance) {
    auto r = run_benign("s = summarize_screenshot_content(Instruction(text=\"d\"))\nprint(\"state:\", s.text)\nmark_done()\n",
                        trivial_scenario());
    ASSERT_EQ(r.trace.count(EventKind::Print), 1u);
    for (const auto& e : r.trace.events()) {
        if (e.kind != EventKind::Print) continue;
        EXPECT_EQ(e.detail.rfind("state: ", 0), 0u);
        EXPECT_EQ(e.provenance, runtime::Provenance{1});
    }
}

}  // namespace
