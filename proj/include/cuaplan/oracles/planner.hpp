#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuaplan/runtime/trace.hpp"

namespace cuaplan::oracles {

enum class PlannerMode { SingleShot, FidesTurn };

struct PlannerRequest {
    std::string task_id;
    std::string task;
    std::string prompt_id = "ova";
    std::uint64_t seed = 0;
    PlannerMode mode = PlannerMode::SingleShot;
    std::string transcript;  // redacted history, FidesTurn only
    int turn = 0;            // 0-based, FidesTurn only
};

struct PlannerReply {
    std::string text;
    runtime::Cost cost{"planner", 1, 0, 0};
};

// The privileged planner. Never sees quarantined data.
class PlannerOracle {
public:
    virtual ~PlannerOracle() = default;
    virtual PlannerReply plan(const PlannerRequest& r) const = 0;
};

using PlannerPtr = std::shared_ptr<const PlannerOracle>;

class UnknownTask : public std::runtime_error {
public:
    explicit UnknownTask(const std::string& id) : std::runtime_error("unknown task '" + id + "'"), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

// One task's planner library: seed-indexed plan variants and Fides turn lists.
struct PlannerLibrary {
    std::string task_id;
    std::string task;
    std::vector<std::string> plans;                     // rendered plan text per variant
    std::vector<std::string> styles;                    // variant style, "file" for fixed plans
    std::vector<std::vector<std::string>> fides_turns;  // statement lists

    // `dir` resolves relative plan paths.
    static PlannerLibrary from_json(const nlohmann::json& j, const std::filesystem::path& dir);
};

// Serves plans from fixtures/planners/<task>.json: variant = seed mod count.
class ScriptedPlanner : public PlannerOracle {
public:
    explicit ScriptedPlanner(std::filesystem::path library_dir);
    PlannerReply plan(const PlannerRequest& r) const override;

    const PlannerLibrary& library(const std::string& task_id) const;  // UnknownTask
    std::size_t variants(const std::string& task_id) const { return library(task_id).plans.size(); }

private:
    std::filesystem::path dir_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<const PlannerLibrary>> cache_;
};

// Default location under the repo.
std::filesystem::path planner_library_dir();

}  // namespace cuaplan::oracles
