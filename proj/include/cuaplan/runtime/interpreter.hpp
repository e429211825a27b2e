#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuaplan/plan/ast.hpp"
#include "cuaplan/runtime/budgets.hpp"
#include "cuaplan/runtime/run_record.hpp"
#include "cuaplan/tools/broker.hpp"

namespace cuaplan::runtime {

// Missing field, unbound name, wrong guard type. Never escapes a run.
class PlanError : public std::runtime_error {
public:
    explicit PlanError(const std::string& msg) : std::runtime_error(msg) {}
};

using Bindings = std::map<std::string, Value>;

// Guard evaluation without tool access; calls inside `e` are a PlanError.
Value eval_guard(const plan::Expr& e, const Bindings& bindings);

struct ExecOptions {
    Budgets budgets;
    const tools::ToolManifest* manifest = nullptr;  // builtin when null
    std::optional<Cost> plan_cost;                  // planner work that produced the plan
};

// Executes statements against a broker, tagging every tool result with
// the id of the call that produced it. One instance per run.
class Interpreter {
public:
    Interpreter(tools::ToolBroker& broker, const ExecOptions& opts);

    // Runs `body` mounted at `prefix`. Returns false once the run has
    // stopped (terminal call, halt, budget, plan error).
    bool run(const std::vector<plan::Stmt>& body, const std::string& prefix);

    bool stopped() const { return stopped_; }
    // Ends the run with `o` unless it already stopped.
    void stop(Outcome o, const std::string& detail);

    Trace& trace() { return record_.trace; }
    Bindings& bindings() { return bindings_; }
    BudgetMeter& meter() { return meter_; }
    const tools::ToolManifest& manifest() const { return *manifest_; }

    // Called for every variable read; may throw PlanError-like stops via stop().
    std::function<void(const std::string& name)> on_read;

    // Completes and returns the record. A run that never stopped ends FAIL.
    RunRecord finish();

private:
    struct Halt {};

    void exec(const plan::Stmt& s, const std::string& path);
    void exec_body(const std::vector<plan::Stmt>& body, const std::string& prefix);
    Value eval(const plan::Expr& e, const std::string& path);
    Value call_tool(const plan::CallExpr& c, const std::string& path);
    bool truth(const Value& v, const char* what) const;
    [[noreturn]] void halt(Outcome o, const std::string& detail);

    tools::ToolBroker& broker_;
    const tools::ToolManifest* manifest_;
    BudgetMeter meter_;
    Bindings bindings_;
    RunRecord record_;
    std::uint64_t calls_ = 0;
    bool stopped_ = false;
};

// Validates, then runs a whole plan. Never throws for plan or tool problems.
RunRecord execute_plan(const plan::Program& p, tools::ToolBroker& broker, const ExecOptions& opts);
RunRecord execute_plan(const plan::Program& p, tools::ToolBroker& broker, const Budgets& budgets = {});

}  // namespace cuaplan::runtime
