#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuaplan/harness/metrics.hpp"
#include "cuaplan/harness/runner.hpp"

namespace cuaplan::harness {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
    std::string name = "suite";
    std::vector<std::filesystem::path> scenarios;  // files; directories expand to their *.json
    Executor executor = Executor::Camel;
    defenses::DefenseLevel defense = defenses::DefenseLevel::None;
    std::string rules = "aggressive";
    std::vector<std::uint64_t> seeds;
    std::vector<int> pass_k;  // defaults to 1..|seeds|
    runtime::Budgets budgets;
    OracleBindings oracles;
    std::filesystem::path out;
    int jobs = 1;

    // Relative paths resolve against base_dir.
    static SuiteConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
    static SuiteConfig from_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    // Throws ConfigError.
    void check() const;
    std::vector<int> ks() const;
};

// A scenario file resolved into something runnable.
struct SuiteEntry {
    std::string id;  // row name
    env::Scenario scenario;
    std::vector<oracles::Trigger> triggers;
    bool attack = false;
    std::string attack_kind;
};

SuiteEntry load_entry(const std::filesystem::path& path);
std::vector<SuiteEntry> load_entries(const std::vector<std::filesystem::path>& paths);

struct RunSummary {
    std::string row;
    std::string task_id;
    std::string category;
    std::uint64_t seed = 0;
    bool attack = false;
    std::string attack_kind;
    runtime::RunRecord record;
    bool flagged = false;
    bool spoofed_reached = false;
    std::map<std::string, runtime::CostTotals> costs;

    Cell cell() const;
    RunLabel label() const;
    nlohmann::json to_json() const;  // no trace events
    static RunSummary from_json(const nlohmann::json& j);
};

Cell cell_for(const runtime::RunRecord& r);

struct SuiteResult {
    SuiteConfig config;
    SuccessMatrix matrix;
    std::vector<RunSummary> runs;  // row-major, seeds in config order
};

// Runs every (entry, seed) pair, up to config.jobs at a time. Individual
// run failures are recorded, never thrown.
SuiteResult run_suite(const SuiteConfig& cfg);
SuiteResult run_suite(const SuiteConfig& cfg, const std::vector<SuiteEntry>& entries);

}  // namespace cuaplan::harness
