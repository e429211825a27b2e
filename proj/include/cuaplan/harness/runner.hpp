#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "cuaplan/defenses/defended_broker.hpp"
#include "cuaplan/env/scenario.hpp"
#include "cuaplan/oracles/compromised.hpp"
#include "cuaplan/oracles/external.hpp"
#include "cuaplan/oracles/planner.hpp"
#include "cuaplan/runtime/budgets.hpp"
#include "cuaplan/runtime/run_record.hpp"

namespace cuaplan::harness {

enum class Executor { Camel, Fides };

std::string to_string(Executor e);  // CAMEL, FIDES
Executor executor_from_string(const std::string& s);

// Which stand-ins answer for the models.
struct OracleBindings {
    std::string perception = "benign";  // benign | adversarial | external
    std::string viewer = "uitars";      // identity patches can target
    std::string planner = "scripted";   // scripted | external
    std::string checkers = "rule";      // rule | external
    std::optional<oracles::EndpointConfig> endpoint;

    static OracleBindings from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Everything one run depends on.
struct RunSpec {
    env::Scenario scenario;
    std::vector<oracles::Trigger> triggers;  // compromised perception when non-empty
    std::string task_id;                     // planner library key; scenario id when empty
    Executor executor = Executor::Camel;
    defenses::DefenseLevel defense = defenses::DefenseLevel::None;
    defenses::SuspicionRules rules;
    std::uint64_t seed = 0;
    runtime::Budgets budgets;
    OracleBindings oracles;
    std::optional<std::string> plan_text;  // bypasses the planner
    int max_variable_reuse = 5;
    bool relaxation = true;
};

runtime::RunRecord run_one(const RunSpec& spec, const oracles::PlannerOracle& planner);
// Uses the scripted planner over the fixture library.
runtime::RunRecord run_one(const RunSpec& spec);

// Any ATTACKED verdict in the trace.
bool flagged(const runtime::RunRecord& r);
std::size_t verdict_count(const runtime::RunRecord& r, const std::string& status);

oracles::PerceptionPtr make_perception(const OracleBindings& b, std::uint64_t seed,
                                       const std::vector<oracles::Trigger>& triggers);
oracles::PlannerPtr make_planner(const OracleBindings& b);

}  // namespace cuaplan::harness
