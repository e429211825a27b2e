#include "cuaplan/oracles/planner.hpp"

#include <optional>

#include "cuaplan/oracles/recipe.hpp"
#include "cuaplan/util/files.hpp"

namespace cuaplan::oracles {

using nlohmann::json;

std::filesystem::path planner_library_dir() { return repo_root() / "fixtures" / "planners"; }

PlannerLibrary PlannerLibrary::from_json(const json& j, const std::filesystem::path& dir) {
    PlannerLibrary lib;
    lib.task_id = j.at("task_id").get<std::string>();
    lib.task = j.value("task", "");
    std::optional<Recipe> recipe;
    if (j.contains("recipe")) {
        recipe = Recipe::from_json(j.at("recipe"));
        if (recipe->task.empty()) recipe->task = lib.task;
    }
    for (const auto& v : j.at("variants")) {
        if (v.contains("plan")) {
            lib.plans.push_back(read_text_file(dir / v.at("plan").get<std::string>()));
            lib.styles.push_back("file");
            continue;
        }
        if (!recipe) throw std::invalid_argument("planner '" + lib.task_id + "' has recipe variants but no recipe");
        PlanStyle style = plan_style_from_string(v.value("style", "visual-first"));
        lib.plans.push_back(render_recipe(*recipe, style, v.value("phrasing", 0)));
        lib.styles.push_back(to_string(style));
    }
    for (const auto& t : j.value("fides", json::array())) lib.fides_turns.push_back(t.get<std::vector<std::string>>());
    if (lib.plans.empty()) throw std::invalid_argument("planner '" + lib.task_id + "' has no variants");
    return lib;
}

ScriptedPlanner::ScriptedPlanner(std::filesystem::path library_dir) : dir_(std::move(library_dir)) {}

const PlannerLibrary& ScriptedPlanner::library(const std::string& task_id) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(task_id);
    if (it != cache_.end()) return *it->second;
    const auto path = dir_ / (task_id + ".json");
    if (task_id.empty() || task_id.find('/') != std::string::npos || !std::filesystem::exists(path)) {
        throw UnknownTask(task_id);
    }
    // Plan paths inside a library are relative to fixtures/.
    auto lib = std::make_shared<const PlannerLibrary>(PlannerLibrary::from_json(read_json_file(path), dir_.parent_path()));
    cache_[task_id] = lib;
    return *lib;
}

PlannerReply ScriptedPlanner::plan(const PlannerRequest& r) const {
    const PlannerLibrary& lib = library(r.task_id);
    PlannerReply reply;
    if (r.mode == PlannerMode::SingleShot) {
        reply.text = lib.plans[r.seed % lib.plans.size()];
        return reply;
    }
    if (lib.fides_turns.empty()) throw UnknownTask(r.task_id + " (no fides turns)");
    const auto& turns = lib.fides_turns[r.seed % lib.fides_turns.size()];
    // A scripted planner that runs out of statements gives up.
    reply.text = r.turn >= 0 && static_cast<std::size_t>(r.turn) < turns.size() ? turns[static_cast<std::size_t>(r.turn)]
                                                                              : "mark_fail()";
    return reply;
}

}  // namespace cuaplan::oracles
