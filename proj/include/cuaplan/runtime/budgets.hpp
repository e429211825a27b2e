#pragma once

#include <optional>
#include <string>

#include "cuaplan/tools/manifest.hpp"

namespace cuaplan::runtime {

struct Budgets {
    int max_gui_steps = 15;
    int max_tool_calls = 70;
    std::optional<int> wall_limit;  // statement-count ceiling

    // Throws std::invalid_argument unless every limit is positive.
    void check() const;
};

enum class Exhaustion { None, GuiSteps, ToolCalls, WallLimit };

std::string to_string(Exhaustion e);  // "max_gui_steps", ...

// Running totals for one run. Charges happen before the tool executes.
class BudgetMeter {
public:
    explicit BudgetMeter(Budgets b);

    // Costs: no_op and print are free; wait takes a tool call but no GUI
    // step; environment-mutating tools take both.
    Exhaustion charge(const tools::ToolSpec& tool);
    Exhaustion charge_statement();

    int gui_steps() const { return gui_; }
    int tool_calls() const { return calls_; }
    int statements() const { return statements_; }
    int gui_remaining() const { return budgets_.max_gui_steps - gui_; }
    int calls_remaining() const { return budgets_.max_tool_calls - calls_; }
    const Budgets& budgets() const { return budgets_; }

private:
    Budgets budgets_;
    int gui_ = 0;
    int calls_ = 0;
    int statements_ = 0;
};

}  // namespace cuaplan::runtime
