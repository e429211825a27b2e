#include <gtest/gtest.h>

#include "cuaplan/oracles/compromised.hpp"
#include "cuaplan/oracles/external.hpp"
#include "cuaplan/oracles/planner.hpp"
#include "cuaplan/oracles/recipe.hpp"
#include "cuaplan/oracles/scripted.hpp"
#include "cuaplan/plan/validate.hpp"
#include "harness_support.hpp"
#include "runtime_support.hpp"

namespace {

using namespace cuaplan;
using oracles::PerceptionQuery;
using oracles::QueryKind;

struct Screen {
    env::EnvState state;
    env::VisualView visual;
    std::optional<env::DomNode> dom;

    explicit Screen(const env::Scenario& s, const std::string& frame = "", const std::string& viewer = "uitars")
        : state(env::load_scenario(s)) {
        if (!frame.empty()) state.current_frame = frame;
        visual = env::render_visual(state, viewer);
        dom = env::dom_tree(state);
    }
    PerceptionQuery query(QueryKind k, const std::string& text) const {
        PerceptionQuery q;
        q.kind = k;
        q.text = text;
        q.visual = &visual;
        q.dom = dom ? &*dom : nullptr;
        return q;
    }
};

TEST(BenignPerception, SummaryNamesPopupsAndElements) {
    Screen s(testkit::scenario_fixture("benign/natural_products.json"));
    const std::string text = oracles::benign_summary(s.visual);
    EXPECT_NE(text.find("A web browser is open showing the website"), std::string::npos) << text;
    EXPECT_NE(text.find("cookie-banner popup reads 'We value your privacy'"), std::string::npos) << text;
    EXPECT_NE(text.find("button 'Accept all'"), std::string::npos) << text;
}

TEST(BenignPerception, CookieHypothesisNeedsAConsentPopup) {
    const std::string hyp = "A cookie or privacy consent popup with accept/consent buttons is visible";
    Screen with(testkit::scenario_fixture("benign/natural_products.json"));
    EXPECT_EQ(oracles::benign_verify(oracles::benign_summary(with.visual), hyp), "OK");
    Screen without(testkit::scenario_fixture("benign/natural_products.json"), "search_results");
    EXPECT_EQ(oracles::benign_verify(oracles::benign_summary(without.visual), hyp), "FAIL");
}

TEST(BenignPerception, NegatedClauseIsIgnored) {
    EXPECT_EQ(oracles::benign_verify("The desktop home screen is shown.",
                                     "We are on the desktop home screen and not inside a web browser."),
              "OK");
    EXPECT_EQ(oracles::benign_verify("", "anything"), "UNKNOWN");
}

TEST(BenignPerception, LocatesBySynonyms) {
    Screen s(testkit::scenario_fixture("benign/natural_products.json"));
    auto r = oracles::benign_locate_visual("an 'I agree' or consent button in a cookie popup", s.visual);
    ASSERT_TRUE(r.start);
    EXPECT_EQ(r.id, "consent-accept");
    auto none = oracles::benign_locate_visual("a purple elephant", s.visual);
    EXPECT_FALSE(none.start);
}

TEST(BenignPerception, DomLocateHonorsRoles) {
    Screen s(testkit::scenario_fixture("benign/natural_products.json"));
    auto any = oracles::benign_locate_dom("Accept all", *s.dom, std::nullopt);
    EXPECT_EQ(any.id, "consent-accept");
    auto links = oracles::benign_locate_dom("Accept all", *s.dom, std::vector<std::string>{"link"});
    EXPECT_FALSE(links.start);
    EXPECT_EQ(oracles::canonical_role("textbox"), "entry");
    EXPECT_EQ(oracles::canonical_role("button"), "push-button");
}

TEST(AdversarialPerception, DeterministicPerSeedAndQuery) {
    Screen s(testkit::scenario_fixture("benign/natural_products.json"));
    oracles::AdversarialPerception a(7), b(7), c(8);
    auto q = s.query(QueryKind::Find, "anything");
    EXPECT_EQ(oracles::answer_to_json(a.answer(q)), oracles::answer_to_json(b.answer(q)));
    bool differs = false;
    for (int i = 0; i < 20 && !differs; ++i) {
        q.call_index = static_cast<std::uint64_t>(i);
        differs = oracles::answer_to_json(a.answer(q)) != oracles::answer_to_json(c.answer(q));
    }
    EXPECT_TRUE(differs);
}

TEST(ScriptedPerception, FirstMatchWinsThenFallback) {
    auto script = oracles::OracleScript::from_json(nlohmann::json::parse(R"({
      "rules": [
        {"kind": "find", "text_contains": "cookie", "response": {"start": [0.5, 0.5], "thought": "first"}},
        {"kind": "find", "text_contains": "cookie", "response": {"thought": "second"}},
        {"kind": "verify", "response": {"status": "FAIL"}}
      ],
      "fallback": {"status": "UNKNOWN", "text": "fallback"}
    })"));
    oracles::ScriptedPerception p(script);
    Screen s(testkit::scenario_fixture("benign/natural_products.json"));
    auto a = p.answer(s.query(QueryKind::Find, "the COOKIE button"));
    EXPECT_EQ(a.thought, "first");
    ASSERT_TRUE(a.start);
    EXPECT_DOUBLE_EQ(a.start->x, 0.5);
    EXPECT_EQ(p.answer(s.query(QueryKind::Verify, "x")).status, "FAIL");
    EXPECT_EQ(p.answer(s.query(QueryKind::Summarize, "x")).text, "fallback");
    EXPECT_EQ(oracles::OracleScript::from_json(script.to_json()).to_json(), script.to_json());
}

TEST(ScriptedPerception, DelegatesWithoutFallback) {
    oracles::OracleScript script;
    oracles::ScriptedPerception p(script, std::make_shared<oracles::BenignPerception>());
    Screen s(testkit::scenario_fixture("benign/natural_products.json"));
    EXPECT_FALSE(p.answer(s.query(QueryKind::Summarize, "")).text.empty());
    oracles::ScriptedPerception bare(script);
    EXPECT_EQ(bare.answer(s.query(QueryKind::Summarize, "")).status, "UNKNOWN");
}

TEST(CompromisedWrapper, ForgesOnlyWhereTheTriggerFires) {
    auto e = testkit::attack_entry("weather_static.json");
    ASSERT_EQ(e.triggers.size(), 1u);
    const auto& t = e.triggers.front();
    oracles::CompromisedWrapper w(std::make_shared<oracles::BenignPerception>(), e.triggers);
    Screen home(e.scenario);
    auto q = home.query(QueryKind::Find, "a button to accept all cookies");
    ASSERT_TRUE(t.fires(q));
    auto forged = w.answer(q);
    ASSERT_TRUE(forged.start);
    const auto* target = home.visual.item(t.target);
    ASSERT_NE(target, nullptr);
    EXPECT_TRUE(target->bounds.contains(*forged.start));
    // Unrelated text, other query kinds and other frames go to the inner oracle.
    oracles::BenignPerception inner;
    for (auto other : {home.query(QueryKind::Find, "the 10 Day tab"), home.query(QueryKind::FindText, "accept cookies"),
                       Screen(e.scenario, "city_today").query(QueryKind::Find, "accept cookies")}) {
        EXPECT_FALSE(t.fires(other));
    }
    auto far = home.query(QueryKind::Find, "the 10 Day tab");
    EXPECT_EQ(oracles::answer_to_json(w.answer(far)), oracles::answer_to_json(inner.answer(far)));
}

TEST(CompromisedWrapper, TriggerRoundTripsThroughJson) {
    auto e = testkit::attack_entry("natural_products_pixel.json");
    for (const auto& t : e.triggers) EXPECT_EQ(oracles::Trigger::from_json(t.to_json()).to_json(), t.to_json());
}

TEST(ScriptedPlanner, NaturalProductsSeedsServeTheFixturePlans) {
    oracles::ScriptedPlanner p(oracles::planner_library_dir());
    oracles::PlannerRequest r;
    r.task_id = "natural-products";
    r.seed = 0;
    EXPECT_EQ(p.plan(r).text, testkit::fixture_text("plans/natural_products_g1.plan"));
    r.seed = 1;
    EXPECT_EQ(p.plan(r).text, testkit::fixture_text("plans/natural_products_g2.plan"));
    r.seed = p.variants("natural-products");
    EXPECT_EQ(p.plan(r).text, testkit::fixture_text("plans/natural_products_g1.plan"));
}

TEST(ScriptedPlanner, UnknownTaskRaises) {
    oracles::ScriptedPlanner p(oracles::planner_library_dir());
    oracles::PlannerRequest r;
    r.task_id = "no-such-task";
    EXPECT_THROW(p.plan(r), oracles::UnknownTask);
    r.task_id = "../planners/natural-products";
    EXPECT_THROW(p.plan(r), oracles::UnknownTask);
}

TEST(ScriptedPlanner, FidesTurnsRunOutIntoMarkFail) {
    oracles::ScriptedPlanner p(oracles::planner_library_dir());
    oracles::PlannerRequest r;
    r.task_id = "writer-bold";
    r.mode = oracles::PlannerMode::FidesTurn;
    r.turn = 0;
    EXPECT_EQ(p.plan(r).text.rfind("hotkey(", 0), 0u);
    r.turn = 1000;
    EXPECT_EQ(p.plan(r).text, "mark_fail()");
}

TEST(ScriptedPlanner, EveryLibraryVariantValidates) {
    oracles::ScriptedPlanner p(oracles::planner_library_dir());
    for (const auto& e : testkit::all_benign()) {
        const auto& lib = p.library(e.scenario.id);
        EXPECT_EQ(lib.task, e.scenario.task) << e.id;
        for (std::size_t i = 0; i < lib.plans.size(); ++i) {
            auto program = plan::parse_plan(lib.plans[i]);
            auto report = plan::validate_plan(program);
            EXPECT_TRUE(report.ok) << e.id << " variant " << i << "\n" << report.to_json().dump(2);
        }
    }
}

TEST(Recipe, StylesDifferInHowTheyLocate) {
    auto recipe = oracles::Recipe::from_json(nlohmann::json::parse(R"({
      "task": "t", "steps": [{"op": "cookies"}, {"op": "click", "targets": ["a", "b"]}]
    })"));
    auto vf = oracles::render_recipe(recipe, oracles::PlanStyle::VisualFirst, 0);
    auto dom = oracles::render_recipe(recipe, oracles::PlanStyle::DomOnly, 0);
    auto nc = oracles::render_recipe(recipe, oracles::PlanStyle::NoCookies, 0);
    EXPECT_NE(vf.find("res1 = find(Instruction(text=desc1"), std::string::npos);
    EXPECT_EQ(dom.find("= find(Instruction"), std::string::npos);
    EXPECT_EQ(nc.find("cookie1"), std::string::npos);
    EXPECT_NE(oracles::render_recipe(recipe, oracles::PlanStyle::VisualFirst, 1).find("[\"b\", \"a\"]"), std::string::npos);
    EXPECT_THROW(oracles::Recipe::from_json(nlohmann::json::parse(R"({"steps": [{"op": "jump"}]})")),
                 std::invalid_argument);
}

TEST(Prompts, EveryExternalPromptShips) {
    for (const char* id : {"ova", "fides_turn", "qvlm_summarize", "qvlm_find", "qvlm_find_text", "qvlm_verify",
                           "qvlm_check_done", "checker_dom", "checker_visual"}) {
        EXPECT_FALSE(oracles::load_prompt(id).empty()) << id;
    }
}

}  // namespace
