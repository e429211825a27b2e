#include "cuaplan/harness/runner.hpp"

#include <stdexcept>

#include "cuaplan/fides/fides.hpp"
#include "cuaplan/plan/parser.hpp"
#include "cuaplan/tools/toolset.hpp"
#include "cuaplan/util/digest.hpp"
#include "cuaplan/util/text.hpp"

namespace cuaplan::harness {

using nlohmann::json;
using runtime::Outcome;
using runtime::RunRecord;

std::string to_string(Executor e) { return e == Executor::Camel ? "CAMEL" : "FIDES"; }

Executor executor_from_string(const std::string& s) {
    const std::string l = text::to_lower(s);
    if (l == "camel") return Executor::Camel;
    if (l == "fides") return Executor::Fides;
    throw std::invalid_argument("unknown executor '" + s + "'");
}

OracleBindings OracleBindings::from_json(const json& j) {
    OracleBindings b;
    b.perception = j.value("perception", b.perception);
    b.viewer = j.value("viewer", b.viewer);
    b.planner = j.value("planner", b.planner);
    b.checkers = j.value("checkers", b.checkers);
    if (b.perception == "external" || b.planner == "external" || b.checkers == "external") {
        b.endpoint = oracles::EndpointConfig::from_env();
    }
    return b;
}

json OracleBindings::to_json() const {
    return {{"perception", perception}, {"viewer", viewer}, {"planner", planner}, {"checkers", checkers}};
}

namespace {

oracles::ClientPtr client_for(const OracleBindings& b) {
    return std::make_shared<oracles::ExternalTextClient>(b.endpoint.value_or(oracles::EndpointConfig::from_env()));
}

RunRecord plan_error_record(const std::string& detail, const tools::ToolBroker& broker) {
    RunRecord r;
    runtime::TraceEvent plan_ev;
    plan_ev.kind = runtime::EventKind::Plan;
    plan_ev.callee = "planner";
    r.trace.append(plan_ev);
    runtime::TraceEvent halt;
    halt.kind = runtime::EventKind::Halt;
    halt.status = to_string(Outcome::PlanError);
    halt.detail = detail;
    r.trace.append(halt);
    r.outcome = Outcome::PlanError;
    r.detail = detail;
    r.final_env_digest = env::snapshot_digest(broker.env());
    r.final_frame = broker.env().current_frame;
    r.frames_visited = broker.env().history;
    return r;
}

}  // namespace

oracles::PerceptionPtr make_perception(const OracleBindings& b, std::uint64_t seed,
                                       const std::vector<oracles::Trigger>& triggers) {
    oracles::PerceptionPtr p;
    if (b.perception == "benign") p = std::make_shared<oracles::BenignPerception>(b.viewer);
    else if (b.perception == "adversarial") p = std::make_shared<oracles::AdversarialPerception>(seed);
    else if (b.perception == "external") p = std::make_shared<oracles::ExternalPerception>(client_for(b), b.viewer);
    else throw std::invalid_argument("unknown perception binding '" + b.perception + "'");
    if (!triggers.empty()) p = std::make_shared<oracles::CompromisedWrapper>(p, triggers);
    return p;
}

oracles::PlannerPtr make_planner(const OracleBindings& b) {
    if (b.planner == "scripted") return std::make_shared<oracles::ScriptedPlanner>(oracles::planner_library_dir());
    if (b.planner == "external") return std::make_shared<oracles::ExternalPlanner>(client_for(b));
    throw std::invalid_argument("unknown planner binding '" + b.planner + "'");
}

RunRecord run_one(const RunSpec& spec, const oracles::PlannerOracle& planner) {
    tools::ToolsetConfig tcfg;
    tcfg.seed = spec.seed;
    tools::EnvBroker broker(env::load_scenario(spec.scenario), make_perception(spec.oracles, spec.seed, spec.triggers),
                            nullptr, tcfg);
    defenses::DefenseConfig dcfg = defenses::DefenseConfig::make(spec.defense, spec.rules);
    if (spec.oracles.checkers == "external") {
        auto client = client_for(spec.oracles);
        dcfg.checker_dom = std::make_shared<oracles::ExternalChecker>(client, "checker_dom", "dom-checker");
        dcfg.checker_visual = std::make_shared<oracles::ExternalChecker>(client, "checker_visual", "visual-checker");
    }
    defenses::DefendedBroker defended(broker, dcfg);
    const std::string task_id = spec.task_id.empty() ? spec.scenario.id : spec.task_id;

    if (spec.executor == Executor::Fides) {
        fides::FidesOptions fo;
        fo.budgets = spec.budgets;
        fo.max_variable_reuse = spec.max_variable_reuse;
        fo.relaxation = spec.relaxation;
        fo.task_id = task_id;
        fo.seed = spec.seed;
        return fides::fides_run(spec.scenario.task, planner, defended, fo).record;
    }

    runtime::ExecOptions opts;
    opts.budgets = spec.budgets;
    std::string text;
    if (spec.plan_text) {
        text = *spec.plan_text;
    } else {
        oracles::PlannerRequest req;
        req.task_id = task_id;
        req.task = spec.scenario.task;
        req.seed = spec.seed;
        oracles::PlannerReply reply = planner.plan(req);
        text = reply.text;
        opts.plan_cost = reply.cost;
    }
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        return plan_error_record("planner returned no plan text", defended);
    }
    plan::Program program;
    try {
        program = plan::parse_plan(text);
    } catch (const std::exception& e) {
        return plan_error_record(e.what(), defended);
    }
    return runtime::execute_plan(program, defended, opts);
}

RunRecord run_one(const RunSpec& spec) {
    auto planner = make_planner(spec.oracles);
    return run_one(spec, *planner);
}

std::size_t verdict_count(const RunRecord& r, const std::string& status) {
    std::size_t n = 0;
    for (const auto& e : r.trace.events()) {
        if (e.kind == runtime::EventKind::Verdict && (status.empty() || e.status == status)) ++n;
    }
    return n;
}

bool flagged(const RunRecord& r) { return verdict_count(r, "ATTACKED") > 0; }

}  // namespace cuaplan::harness
