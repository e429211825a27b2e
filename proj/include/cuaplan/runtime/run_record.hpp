#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

#include "cuaplan/runtime/trace.hpp"
#include "cuaplan/runtime/value.hpp"

namespace cuaplan::runtime {

enum class Outcome { Success, Fail, HaltedByDefense, BudgetExhausted, PlanError, ReuseExceeded };

std::string to_string(Outcome o);  // SUCCESS, FAIL, HALTED_BY_DEFENSE, ...
Outcome outcome_from_string(const std::string& s);

struct RunRecord {
    Outcome outcome = Outcome::Fail;
    std::string detail;  // halt reason, exhausted budget, plan error text
    Trace trace;
    std::string final_env_digest;
    std::string final_frame;
    std::vector<std::string> frames_visited;
    std::map<std::string, Value> bindings;
    int tool_calls = 0;
    int gui_steps = 0;
    int turns = 0;  // Fides only

    // "BUDGET_EXHAUSTED(max_gui_steps)" style label.
    std::string label() const;
    bool visited(const std::string& frame) const;
    // Summary without the event list.
    nlohmann::json summary_json() const;
};

}  // namespace cuaplan::runtime
