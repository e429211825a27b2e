#include "cuaplan/runtime/budgets.hpp"

#include <stdexcept>

namespace cuaplan::runtime {

void Budgets::check() const {
    if (max_gui_steps <= 0 || max_tool_calls <= 0 || (wall_limit && *wall_limit <= 0)) {
        throw std::invalid_argument("budgets must be positive");
    }
}

std::string to_string(Exhaustion e) {
    switch (e) {
        case Exhaustion::None: return "none";
        case Exhaustion::GuiSteps: return "max_gui_steps";
        case Exhaustion::ToolCalls: return "max_tool_calls";
        case Exhaustion::WallLimit: return "wall_limit";
    }
    return "none";
}

BudgetMeter::BudgetMeter(Budgets b) : budgets_(b) { budgets_.check(); }

Exhaustion BudgetMeter::charge(const tools::ToolSpec& tool) {
    if (tool.name == "no_op") return Exhaustion::None;
    if (calls_ + 1 > budgets_.max_tool_calls) return Exhaustion::ToolCalls;
    if (tool.mutates_env && gui_ + 1 > budgets_.max_gui_steps) return Exhaustion::GuiSteps;
    ++calls_;
    if (tool.mutates_env) ++gui_;
    return Exhaustion::None;
}

Exhaustion BudgetMeter::charge_statement() {
    if (budgets_.wall_limit && statements_ + 1 > *budgets_.wall_limit) return Exhaustion::WallLimit;
    ++statements_;
    return Exhaustion::None;
}

}  // namespace cuaplan::runtime
