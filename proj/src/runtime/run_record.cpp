#include "cuaplan/runtime/run_record.hpp"

#include <stdexcept>

namespace cuaplan::runtime {

namespace {

const std::vector<std::pair<Outcome, std::string>>& outcome_names() {
    static const std::vector<std::pair<Outcome, std::string>> names = {
        {Outcome::Success, "SUCCESS"},
        {Outcome::Fail, "FAIL"},
        {Outcome::HaltedByDefense, "HALTED_BY_DEFENSE"},
        {Outcome::BudgetExhausted, "BUDGET_EXHAUSTED"},
        {Outcome::PlanError, "PLAN_ERROR"},
        {Outcome::ReuseExceeded, "REUSE_EXCEEDED"},
    };
    return names;
}

}  // namespace

std::string to_string(Outcome o) {
    for (const auto& [k, n] : outcome_names()) {
        if (k == o) return n;
    }
    return "FAIL";
}

Outcome outcome_from_string(const std::string& s) {
    for (const auto& [k, n] : outcome_names()) {
        if (n == s) return k;
    }
    throw std::invalid_argument("unknown outcome '" + s + "'");
}

std::string RunRecord::label() const {
    if (outcome == Outcome::Success || outcome == Outcome::Fail || detail.empty()) return to_string(outcome);
    return to_string(outcome) + "(" + detail + ")";
}

bool RunRecord::visited(const std::string& frame) const {
    for (const auto& f : frames_visited) {
        if (f == frame) return true;
    }
    return false;
}

nlohmann::json RunRecord::summary_json() const {
    nlohmann::json b = nlohmann::json::object();
    for (const auto& [name, v] : bindings) {
        b[name] = {{"value", v.payload_json()}, {"provenance", provenance_label(v.prov)}};
    }
    auto costs = nlohmann::json::object();
    for (const auto& [component, t] : trace.cost_by_component()) {
        costs[component] = {{"calls", t.calls}, {"input_tokens", t.input_tokens}, {"output_tokens", t.output_tokens}};
    }
    return {{"outcome", to_string(outcome)},
            {"detail", detail},
            {"final_env_digest", final_env_digest},
            {"final_frame", final_frame},
            {"frames_visited", frames_visited},
            {"tool_calls", tool_calls},
            {"gui_steps", gui_steps},
            {"turns", turns},
            {"events", trace.size()},
            {"trace_digest", trace.digest()},
            {"costs", costs},
            {"bindings", b}};
}

}  // namespace cuaplan::runtime
