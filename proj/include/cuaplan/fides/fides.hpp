#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cuaplan/oracles/planner.hpp"
#include "cuaplan/runtime/interpreter.hpp"

namespace cuaplan::fides {

// One executed turn as the executor remembers it.
struct HistoryEntry {
    std::string statement;
    std::string target;                   // assigned name, empty for bare expressions
    std::optional<runtime::Value> value;  // assigned value
};

struct TranscriptTurn {
    std::string statement;
    std::string shown;  // placeholder, literal, or empty
    bool operator==(const TranscriptTurn&) const = default;
};

// What the planner is allowed to see.
struct RedactedTranscript {
    std::vector<TranscriptTurn> turns;

    std::string render() const;
    nlohmann::json to_json() const;
};

// Quarantined values become "<VARn: redacted>" (n counts quarantined
// values in creation order). With `relaxation`, quarantined booleans are
// shown as True/False.
RedactedTranscript redact(const std::vector<HistoryEntry>& history, bool relaxation);

// Reference counts of quarantined variables; a reassignment starts a new count.
class VariableStore {
public:
    explicit VariableStore(int max_reuse) : max_reuse_(max_reuse) {}
    // False once `name` is read more than max_reuse times.
    bool read(const std::string& name);
    void assigned(const std::string& name) { counts_.erase(name); }
    int count(const std::string& name) const;
    int max_reuse() const { return max_reuse_; }

private:
    int max_reuse_;
    std::map<std::string, int> counts_;
};

struct FidesOptions {
    runtime::Budgets budgets;  // max_tool_calls doubles as the turn cap
    int max_variable_reuse = 5;
    bool relaxation = true;
    std::string task_id;
    std::uint64_t seed = 0;
};

struct FidesResult {
    runtime::RunRecord record;
    RedactedTranscript transcript;           // as of the last turn
    std::vector<std::string> planner_views;  // transcript text shown before each turn
};

FidesResult fides_run(const std::string& task, const oracles::PlannerOracle& planner, tools::ToolBroker& broker,
                      const FidesOptions& opts);

}  // namespace cuaplan::fides
