// cuaplan command line: validate, run, suite, attack, report.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "cuaplan/attacks/attacks.hpp"
#include "cuaplan/harness/report.hpp"
#include "cuaplan/harness/runner.hpp"
#include "cuaplan/harness/suite.hpp"
#include "cuaplan/plan/call_sites.hpp"
#include "cuaplan/plan/errors.hpp"
#include "cuaplan/plan/parser.hpp"
#include "cuaplan/plan/validate.hpp"
#include "cuaplan/util/files.hpp"

namespace fs = std::filesystem;
using namespace cuaplan;
using nlohmann::json;

namespace {

struct RunOpts {
    std::string scenario;
    std::string plan_file;
    std::string planner = "scripted";
    std::string perception = "benign";
    std::string checkers = "rule";
    std::string executor = "camel";
    std::string defense = "none";
    std::string rules = "aggressive";
    std::uint64_t seed = 0;
    std::string kind;
};

// A path to a benign or attack fixture, or a benign scenario id.
harness::SuiteEntry resolve_scenario(const std::string& arg) {
    if (fs::exists(arg)) return harness::load_entry(arg);
    const fs::path dir = repo_root() / "fixtures" / "scenarios" / "benign";
    for (const auto& e : harness::load_entries({dir})) {
        if (e.id == arg) return e;
    }
    throw std::invalid_argument("no scenario file or benign scenario id '" + arg + "'");
}

harness::RunSpec spec_for(const RunOpts& o, const harness::SuiteEntry& e) {
    harness::RunSpec s;
    s.scenario = e.scenario;
    s.triggers = e.triggers;
    s.executor = harness::executor_from_string(o.executor);
    s.defense = defenses::defense_level_from_string(o.defense);
    s.rules = defenses::SuspicionRules::from_profile(o.rules);
    s.seed = o.seed;
    s.oracles.planner = o.planner;
    s.oracles.perception = o.perception;
    s.oracles.checkers = o.checkers;
    if (o.planner == "external" || o.perception == "external" || o.checkers == "external") {
        s.oracles.endpoint = oracles::EndpointConfig::from_env();
    }
    if (!o.plan_file.empty()) s.plan_text = read_text_file(o.plan_file);
    return s;
}

std::string file_safe(std::string s) {
    for (char& c : s) {
        if (c == ':' || c == '/' || c == ' ') c = '_';
    }
    return s;
}

void fresh_dir(const fs::path& dir) {
    std::error_code ec;
    if (fs::exists(dir, ec) && !(fs::is_directory(dir, ec) && fs::is_empty(dir, ec))) {
        throw IoError(dir, "output directory already exists");
    }
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir, ec.message());
}

void write_run(const fs::path& dir, const harness::SuiteEntry& e, const harness::RunSpec& spec,
               const runtime::RunRecord& r) {
    fresh_dir(dir);
    json rec = r.summary_json();
    rec["scenario"] = e.id;
    rec["executor"] = harness::to_string(spec.executor);
    rec["defense"] = defenses::to_string(spec.defense);
    rec["seed"] = spec.seed;
    rec["flagged"] = harness::flagged(r);
    if (!e.scenario.spoofed_frame.empty()) rec["spoofed_reached"] = r.visited(e.scenario.spoofed_frame);
    write_text_file(dir / "record.json", rec.dump(2) + "\n");
    write_text_file(dir / "trace.jsonl", r.trace.to_jsonl());
}

void print_run(const harness::SuiteEntry& e, const runtime::RunRecord& r) {
    std::cout << e.id << ": " << r.label() << "  final frame " << r.final_frame << ", " << r.gui_steps
              << " GUI steps, " << r.tool_calls << " tool calls";
    if (harness::flagged(r)) std::cout << ", flagged";
    if (!e.scenario.spoofed_frame.empty() && r.visited(e.scenario.spoofed_frame)) std::cout << ", reached spoofed frame";
    std::cout << '\n';
}

int cmd_validate(const std::string& path) {
    const std::string text = read_text_file(path);
    plan::Program p;
    try {
        p = plan::parse_plan(text);
    } catch (const plan::SyntaxError& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return 1;
    } catch (const plan::ForbiddenConstruct& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return 1;
    }
    auto report = plan::validate_plan(p);
    for (const auto& f : report.violations) std::cerr << path << ": " << f.path << ": " << f.rule << ": " << f.message << '\n';
    for (const auto& f : report.lints) std::cout << path << ": lint " << f.path << ": " << f.message << '\n';
    const auto sites = plan::enumerate_call_sites(p);
    std::cout << path << ": " << (report.ok ? "ok" : "invalid") << ", " << sites.entries.size() << " call sites\n";
    return report.ok ? 0 : 1;
}

int cmd_run(const RunOpts& o, const fs::path& out) {
    auto entry = resolve_scenario(o.scenario);
    auto spec = spec_for(o, entry);
    auto record = harness::run_one(spec);
    write_run(out / ("run-" + file_safe(entry.id) + "-s" + std::to_string(o.seed)), entry, spec, record);
    print_run(entry, record);
    return 0;
}

int cmd_attack(const RunOpts& o, const fs::path& out) {
    auto base = resolve_scenario(o.scenario);
    if (base.attack) throw std::invalid_argument("'" + o.scenario + "' is already an attack fixture");
    const auto kind = attacks::attack_kind_from_string(o.kind);
    attacks::AttackConfig cfg = attacks::default_cookie_config(base.scenario, kind);
    auto attacked = attacks::apply_attack(base.scenario, cfg);
    harness::SuiteEntry e{attacked.id, attacked.scenario, attacked.triggers, true, attacks::to_string(kind)};
    auto spec = spec_for(o, e);
    auto record = harness::run_one(spec);
    const fs::path dir = out / ("attack-" + file_safe(attacked.id) + "-s" + std::to_string(o.seed));
    write_run(dir, e, spec, record);
    write_text_file(dir / "scenario.json", env::scenario_to_json(attacked.scenario).dump(2) + "\n");
    print_run(e, record);
    return 0;
}

int cmd_suite(const std::string& config, const fs::path& out, int jobs) {
    auto cfg = harness::SuiteConfig::from_file(config);
    if (jobs > 0) cfg.jobs = jobs;
    const fs::path dir = out / (cfg.out.empty() ? fs::path(cfg.name) : cfg.out);
    auto result = harness::run_suite(cfg);
    auto report = harness::build_report(result);
    harness::write_report(report, dir);
    std::cout << report.to_text();
    return 0;
}

int cmd_report(const std::string& input, const fs::path& out, const std::string& name) {
    auto report = harness::report_from_path(input);
    harness::write_report(report, out / name);
    std::cout << report.to_text();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plan-then-execute harness for computer-use agents"};
    app.require_subcommand(1);
    std::string out = "out";
    app.add_option("--out", out, "Directory all outputs are written under");

    RunOpts ro;
    auto add_run_flags = [&](CLI::App* c) {
        c->add_option("--planner", ro.planner, "scripted | external")->check(CLI::IsMember({"scripted", "external"}));
        c->add_option("--perception", ro.perception, "benign | adversarial | external")
            ->check(CLI::IsMember({"benign", "adversarial", "external"}));
        c->add_option("--checkers", ro.checkers, "rule | external")->check(CLI::IsMember({"rule", "external"}));
        c->add_option("--executor", ro.executor, "camel | fides")->check(CLI::IsMember({"camel", "fides"}));
        c->add_option("--defense", ro.defense, "none | dom | consensus")
            ->check(CLI::IsMember({"none", "dom", "consensus"}));
        c->add_option("--rules", ro.rules, "aggressive | lenient")->check(CLI::IsMember({"aggressive", "lenient"}));
        c->add_option("--seed", ro.seed, "Seed (selects the planner variant)");
    };

    std::string plan_path;
    auto* validate = app.add_subcommand("validate", "Parse and validate a plan file");
    validate->add_option("plan", plan_path, "Plan file")->required();

    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("scenario", ro.scenario, "Scenario file or benign scenario id")->required();
    run->add_option("--plan", ro.plan_file, "Execute this plan instead of asking the planner");
    add_run_flags(run);

    std::string config;
    int jobs = 0;
    auto* suite = app.add_subcommand("suite", "Run a suite config and write its report");
    suite->add_option("config", config, "Suite config file")->required();
    suite->add_option("--jobs", jobs, "Concurrent runs");

    auto* attack = app.add_subcommand("attack", "Mutate a benign scenario with an attack and run it");
    attack->add_option("scenario", ro.scenario, "Benign scenario file or id")->required();
    attack->add_option("--kind", ro.kind, "static | html5 | hop | long_range")->required();
    add_run_flags(attack);

    std::string input;
    std::string name = "report";
    auto* report = app.add_subcommand("report", "Compute metrics from saved results");
    report->add_option("input", input, "Directory or matrix/ledger/runs file")->required();
    report->add_option("--name", name, "Report directory name under --out");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*validate) return cmd_validate(plan_path);
        if (*run) return cmd_run(ro, out);
        if (*suite) return cmd_suite(config, out, jobs);
        if (*attack) return cmd_attack(ro, out);
        if (*report) return cmd_report(input, out, name);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
