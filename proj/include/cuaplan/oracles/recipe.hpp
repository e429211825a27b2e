#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace cuaplan::oracles {

// How a generated plan grounds element descriptions.
enum class PlanStyle { VisualFirst, DomFirst, VisualOnly, DomOnly, NoCookies };

std::string to_string(PlanStyle s);
PlanStyle plan_style_from_string(const std::string& s);

struct RecipeStep {
    enum class Op { Click, Type, Hotkey, Press, Cookies };
    Op op = Op::Click;
    std::vector<std::string> targets;  // alternative descriptions, tried in order
    std::vector<std::string> types;    // element roles for the DOM path
    std::string text;                  // Type
    std::vector<std::string> keys;     // Hotkey / Press
    std::string note;                  // action instruction
};

// A task written as abstract steps; plans are rendered from it in
// several styles so that variants differ the way sampled plans do.
struct Recipe {
    std::string task;
    std::vector<RecipeStep> steps;

    static Recipe from_json(const nlohmann::json& j);
};

// Renders an observe-verify-act plan. `phrasing` rotates every
// description list so that variants try alternatives in another order.
std::string render_recipe(const Recipe& r, PlanStyle style, int phrasing);

// Cookie-consent descriptions shared by all generated plans.
const std::vector<std::string>& cookie_descriptions();

}  // namespace cuaplan::oracles
