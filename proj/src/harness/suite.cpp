#include "cuaplan/harness/suite.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "cuaplan/attacks/attacks.hpp"
#include "cuaplan/util/files.hpp"

namespace cuaplan::harness {

namespace fs = std::filesystem;
using nlohmann::json;

SuiteConfig SuiteConfig::from_json(const json& j, const fs::path& base_dir) {
    SuiteConfig c;
    try {
        c.name = j.value("name", c.name);
        for (const auto& s : j.at("scenarios")) {
            fs::path p = s.get<std::string>();
            c.scenarios.push_back(p.is_absolute() ? p : base_dir / p);
        }
        c.executor = executor_from_string(j.value("executor", "camel"));
        c.defense = defenses::defense_level_from_string(j.value("defense", "none"));
        c.rules = j.value("rules", c.rules);
        c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        c.pass_k = j.value("pass_k", std::vector<int>{});
        if (j.contains("budgets")) {
            const json& b = j.at("budgets");
            c.budgets.max_gui_steps = b.value("max_gui_steps", c.budgets.max_gui_steps);
            c.budgets.max_tool_calls = b.value("max_tool_calls", c.budgets.max_tool_calls);
            if (b.contains("wall_limit")) c.budgets.wall_limit = b.at("wall_limit").get<int>();
        }
        if (j.contains("oracles")) c.oracles = OracleBindings::from_json(j.at("oracles"));
        if (j.contains("out")) {
            fs::path o = j.at("out").get<std::string>();
            c.out = o;
        }
        c.jobs = j.value("jobs", 1);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("suite config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("suite config: ") + e.what());
    }
    c.check();
    return c;
}

SuiteConfig SuiteConfig::from_file(const fs::path& path) { return from_json(read_json_file(path), path.parent_path()); }

json SuiteConfig::to_json() const {
    json sc = json::array();
    for (const auto& s : scenarios) {
        // Relative to the repository when possible, absolute otherwise.
        const fs::path abs = fs::absolute(s).lexically_normal();
        const fs::path rel = abs.lexically_relative(repo_root());
        const bool inside = !rel.empty() && *rel.begin() != "..";
        sc.push_back((inside ? rel : abs).generic_string());
    }
    json b = {{"max_gui_steps", budgets.max_gui_steps}, {"max_tool_calls", budgets.max_tool_calls}};
    if (budgets.wall_limit) b["wall_limit"] = *budgets.wall_limit;
    return {{"name", name},           {"scenarios", sc},      {"executor", harness::to_string(executor)},
            {"defense", defenses::to_string(defense)}, {"rules", rules}, {"seeds", seeds},
            {"pass_k", ks()},         {"budgets", b},         {"oracles", oracles.to_json()}};
}

void SuiteConfig::check() const {
    if (seeds.empty()) throw ConfigError("suite '" + name + "' has no seeds");
    if (scenarios.empty()) throw ConfigError("suite '" + name + "' has no scenarios");
    for (int k : pass_k) {
        if (k < 1 || static_cast<std::size_t>(k) > seeds.size()) {
            throw ConfigError("suite '" + name + "' asks for pass@" + std::to_string(k) + " with " +
                              std::to_string(seeds.size()) + " seeds");
        }
    }
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    try {
        budgets.check();
        (void)defenses::SuspicionRules::from_profile(rules);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<int> SuiteConfig::ks() const {
    if (!pass_k.empty()) return pass_k;
    std::vector<int> out;
    for (std::size_t k = 1; k <= seeds.size(); ++k) out.push_back(static_cast<int>(k));
    return out;
}

SuiteEntry load_entry(const fs::path& path) {
    json j = read_json_file(path);
    SuiteEntry e;
    if (attacks::is_attack_fixture(j)) {
        auto a = attacks::load_attack_fixture(path);
        e.id = a.id;
        e.scenario = std::move(a.scenario);
        e.triggers = std::move(a.triggers);
        e.attack = true;
        e.attack_kind = attacks::to_string(a.config.kind);
    } else {
        e.scenario = env::scenario_from_json(j);
        e.id = e.scenario.id;
    }
    return e;
}

std::vector<SuiteEntry> load_entries(const std::vector<fs::path>& paths) {
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> dir;
            for (const auto& d : fs::directory_iterator(p)) {
                if (d.path().extension() == ".json") dir.push_back(d.path());
            }
            std::sort(dir.begin(), dir.end());
            files.insert(files.end(), dir.begin(), dir.end());
        } else {
            files.push_back(p);
        }
    }
    std::vector<SuiteEntry> out;
    for (const auto& f : files) out.push_back(load_entry(f));
    return out;
}

Cell cell_for(const runtime::RunRecord& r) {
    switch (r.outcome) {
        case runtime::Outcome::Success: return Cell::Success;
        case runtime::Outcome::HaltedByDefense: return Cell::Halted;
        case runtime::Outcome::BudgetExhausted: return Cell::Exhausted;
        default: return Cell::Fail;
    }
}

Cell RunSummary::cell() const { return cell_for(record); }

RunLabel RunSummary::label() const { return {attack, flagged, spoofed_reached, category}; }

json RunSummary::to_json() const {
    json j = {{"row", row},
              {"task_id", task_id},
              {"category", category},
              {"seed", seed},
              {"attack", attack},
              {"cell", harness::to_string(cell())},
              {"flagged", flagged},
              {"spoofed_reached", spoofed_reached},
              {"record", record.summary_json()}};
    if (attack) j["attack_kind"] = attack_kind;
    return j;
}

RunSummary RunSummary::from_json(const json& j) {
    RunSummary s;
    s.row = j.at("row").get<std::string>();
    s.task_id = j.value("task_id", "");
    s.category = j.value("category", "");
    s.seed = j.value("seed", std::uint64_t{0});
    s.attack = j.value("attack", false);
    s.attack_kind = j.value("attack_kind", "");
    s.flagged = j.value("flagged", false);
    s.spoofed_reached = j.value("spoofed_reached", false);
    const json& r = j.at("record");
    s.record.outcome = runtime::outcome_from_string(r.at("outcome").get<std::string>());
    s.record.detail = r.value("detail", "");
    s.record.final_frame = r.value("final_frame", "");
    s.record.tool_calls = r.value("tool_calls", 0);
    s.record.gui_steps = r.value("gui_steps", 0);
    s.record.turns = r.value("turns", 0);
    s.record.frames_visited = r.value("frames_visited", std::vector<std::string>{});
    const json costs = r.value("costs", json::object());
    for (const auto& [name, c] : costs.items()) {
        s.costs[name] = {c.value("calls", std::uint64_t{0}), c.value("input_tokens", std::uint64_t{0}),
                         c.value("output_tokens", std::uint64_t{0})};
    }
    return s;
}

namespace {

RunSummary run_entry(const SuiteConfig& cfg, const SuiteEntry& e, std::uint64_t seed,
                     const oracles::PlannerOracle& planner) {
    RunSummary s;
    s.row = e.id;
    s.task_id = e.scenario.id;
    s.category = e.scenario.category;
    s.seed = seed;
    s.attack = e.attack;
    s.attack_kind = e.attack_kind;
    RunSpec spec;
    spec.scenario = e.scenario;
    spec.triggers = e.triggers;
    spec.executor = cfg.executor;
    spec.defense = cfg.defense;
    spec.rules = defenses::SuspicionRules::from_profile(cfg.rules);
    spec.seed = seed;
    spec.budgets = cfg.budgets;
    spec.oracles = cfg.oracles;
    try {
        s.record = run_one(spec, planner);
    } catch (const std::exception& ex) {
        // Recorded against the run; the suite carries on.
        s.record.outcome = runtime::Outcome::PlanError;
        s.record.detail = ex.what();
        runtime::TraceEvent halt;
        halt.kind = runtime::EventKind::Halt;
        halt.status = runtime::to_string(runtime::Outcome::PlanError);
        halt.detail = ex.what();
        s.record.trace.append(halt);
    }
    s.flagged = flagged(s.record);
    s.costs = s.record.trace.cost_by_component();
    s.spoofed_reached = !e.scenario.spoofed_frame.empty() && s.record.visited(e.scenario.spoofed_frame);
    return s;
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& cfg) { return run_suite(cfg, load_entries(cfg.scenarios)); }

SuiteResult run_suite(const SuiteConfig& cfg, const std::vector<SuiteEntry>& entries) {
    cfg.check();
    auto planner = make_planner(cfg.oracles);
    const std::size_t n_seeds = cfg.seeds.size();
    const std::size_t total = entries.size() * n_seeds;
    std::vector<RunSummary> runs(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            runs[i] = run_entry(cfg, entries[i / n_seeds], cfg.seeds[i % n_seeds], *planner);
        }
    };
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), std::max<std::size_t>(total, 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    SuiteResult result;
    result.config = cfg;
    for (std::size_t r = 0; r < entries.size(); ++r) {
        result.matrix.rows.push_back(entries[r].id);
        std::vector<Cell> row;
        for (std::size_t c = 0; c < n_seeds; ++c) row.push_back(runs[r * n_seeds + c].cell());
        result.matrix.cells.push_back(std::move(row));
    }
    result.runs = std::move(runs);
    return result;
}

}  // namespace cuaplan::harness
