#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "cuaplan/harness/report.hpp"
#include "cuaplan/harness/suite.hpp"
#include "cuaplan/util/files.hpp"
#include "harness_support.hpp"

namespace {

using namespace cuaplan;
using harness::Cell;
using harness::SuccessMatrix;
namespace fs = std::filesystem;

// Independent row scan: a row counts once any of its first k cells is a success.
double brute_force(const std::vector<std::vector<Cell>>& cells, int k) {
    if (cells.empty()) return 0.0;
    int hit = 0;
    for (const auto& row : cells) {
        bool any = false;
        for (int c = 0; c < k; ++c) any = any || row[c] == Cell::Success;
        hit += any;
    }
    return static_cast<double>(hit) / cells.size();
}

SuccessMatrix random_matrix(std::mt19937& rng) {
    std::uniform_int_distribution<int> rows(1, 30), cols(1, 8), cell(0, 3);
    SuccessMatrix m;
    int r = rows(rng), c = cols(rng);
    for (int i = 0; i < r; ++i) {
        m.rows.push_back("r" + std::to_string(i));
        std::vector<Cell> row;
        for (int j = 0; j < c; ++j) row.push_back(static_cast<Cell>(cell(rng)));
        m.cells.push_back(row);
    }
    return m;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("cuaplan-test-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

TEST(PassAtK, UitarsColumn) {
    auto m = SuccessMatrix::from_json(read_json_file(testkit::fixture("matrices/uitars_n60.json")));
    ASSERT_EQ(m.rows.size(), 60u);
    const std::vector<std::string> want = {"41.7", "50.0", "58.3", "58.3", "65.0"};
    for (int k = 1; k <= 5; ++k) EXPECT_EQ(harness::pass_at_k_fraction(m, k).percent(), want[k - 1]) << k;
    EXPECT_EQ(harness::pass_at_k_fraction(m, 5).text(), "39/60 (65.0%)");
}

TEST(PassAtK, AllFailIsZero) {
    SuccessMatrix m{{"a", "b"}, {{Cell::Fail, Cell::Halted}, {Cell::Exhausted, Cell::Fail}}};
    for (int k = 1; k <= 2; ++k) EXPECT_EQ(harness::pass_at_k(m, k), 0.0);
}

TEST(PassAtK, BadK) {
    SuccessMatrix m{{"a"}, {{Cell::Success, Cell::Fail}}};
    EXPECT_THROW(harness::pass_at_k(m, 0), harness::BadK);
    EXPECT_THROW(harness::pass_at_k(m, 3), harness::BadK);
    EXPECT_NO_THROW(harness::pass_at_k(m, 2));
}

TEST(PassAtK, MatchesBruteForceAndIsMonotone) {
    std::mt19937 rng(7);
    for (int n = 0; n < 100; ++n) {
        auto m = random_matrix(rng);
        double prev = 0.0;
        for (int k = 1; k <= static_cast<int>(m.columns()); ++k) {
            double got = harness::pass_at_k(m, k);
            EXPECT_EQ(got, brute_force(m.cells, k));
            EXPECT_GE(got, prev);
            prev = got;
        }
    }
}

TEST(SuccessMatrix, JsonAndShape) {
    auto m = SuccessMatrix::from_json(nlohmann::json{{"cells", {"SF", "HE"}}});
    EXPECT_EQ(m.rows, (std::vector<std::string>{"row1", "row2"}));
    EXPECT_EQ(m.cells[1][1], Cell::Exhausted);
    EXPECT_EQ(SuccessMatrix::from_json(m.to_json()).to_json(), m.to_json());
    SuccessMatrix ragged{{"a", "b"}, {{Cell::Success}, {Cell::Success, Cell::Fail}}};
    EXPECT_THROW(ragged.check(), std::invalid_argument);
}

TEST(AttackMetrics, RatesAndUnavailable) {
    std::vector<harness::RunLabel> runs;
    for (int i = 0; i < 10; ++i) runs.push_back({true, i < 6, i >= 6, "chrome"});
    for (int i = 0; i < 17; ++i) runs.push_back({false, i < 3, false, i < 8 ? "chrome" : "gimp"});
    auto m = harness::attack_metrics(runs);
    EXPECT_EQ(m.tpr.text(), "6/10 (60.0%)");
    EXPECT_EQ(m.asr.text(), "4/10 (40.0%)");
    EXPECT_EQ(m.fpr.text(), "3/17 (17.6%)");
    EXPECT_EQ(m.fpr_by_category.at("chrome").text(), "3/8 (37.5%)");
    EXPECT_EQ(m.fpr_by_category.at("gimp").text(), "0/9 (0.0%)");

    auto none = harness::attack_metrics({{false, false, false, "os"}});
    EXPECT_FALSE(none.tpr.available());
    EXPECT_EQ(none.tpr.text(), "UNAVAILABLE");
    EXPECT_EQ(none.fpr.text(), "0/1 (0.0%)");
}

TEST(CostLedger, PaperRatios) {
    auto table = harness::cost_table_from_json(read_json_file(testkit::fixture("ledgers/osworld_17_tasks.json")));
    auto ledger = harness::cost_ledger(table, "no-defense");
    EXPECT_EQ(ledger.row("no-defense").units, 1810856u);
    EXPECT_EQ(ledger.row("camel").units, 3406358u);
    EXPECT_EQ(ledger.row("camel").ratio_text(), "1.88");
    EXPECT_EQ(ledger.row("fides").units, 53599058u);
    EXPECT_EQ(ledger.row("fides").ratio_text(), "29.60");
    EXPECT_EQ(ledger.row("no-defense").ratio_text(), "1.00");
    EXPECT_EQ(ledger.unit, "tokens");
    EXPECT_EQ(ledger.rows.front().config, "no-defense");
    for (const auto& row : ledger.rows) {
        runtime::CostTotals sum;
        for (const auto& [name, c] : row.components) {
            sum.calls += c.calls;
            sum.input_tokens += c.input_tokens;
            sum.output_tokens += c.output_tokens;
        }
        EXPECT_EQ(sum, row.total) << row.config;
    }
}

TEST(CostLedger, IdenticalAndMissingBaseline) {
    harness::CostTable t;
    t["a"]["planner"] = {4, 0, 0};
    t["b"]["planner"] = {4, 0, 0};
    auto l = harness::cost_ledger(t, "a");
    EXPECT_EQ(l.unit, "calls");
    EXPECT_EQ(l.row("b").ratio_text(), "1.00");
    EXPECT_THROW(harness::cost_ledger(t, "zzz"), harness::MissingBaseline);
    EXPECT_EQ(harness::format_ratio(29.595), "29.60");
}

TEST(SuiteConfig, Invariants) {
    auto ok = harness::SuiteConfig::from_file(testkit::fixture("suites/benign_camel.json"));
    EXPECT_NO_THROW(ok.check());
    EXPECT_EQ(ok.ks(), (std::vector<int>{1, 2, 3, 4, 5}));
    EXPECT_EQ(harness::SuiteConfig::from_json(ok.to_json(), repo_root()).to_json(), ok.to_json());

    auto bad = ok;
    bad.seeds.clear();
    EXPECT_THROW(bad.check(), harness::ConfigError);
    bad = ok;
    bad.pass_k = {6};
    EXPECT_THROW(bad.check(), harness::ConfigError);
    bad = ok;
    bad.pass_k = {0};
    EXPECT_THROW(bad.check(), harness::ConfigError);
    bad = ok;
    bad.jobs = 0;
    EXPECT_THROW(bad.check(), harness::ConfigError);
    bad = ok;
    bad.rules = "paranoid";
    EXPECT_THROW(bad.check(), harness::ConfigError);
    bad = ok;
    bad.scenarios.clear();
    EXPECT_THROW(bad.check(), harness::ConfigError);
}

TEST(RunSuite, OneByOne) {
    harness::SuiteConfig cfg;
    cfg.scenarios = {testkit::fixture("scenarios/benign/natural_products.json")};
    cfg.seeds = {0};
    auto r = harness::run_suite(cfg);
    ASSERT_EQ(r.matrix.rows.size(), 1u);
    ASSERT_EQ(r.matrix.columns(), 1u);
    EXPECT_EQ(r.matrix.cells[0][0], Cell::Success);
}

TEST(RunSuite, DeterministicAcrossJobCounts) {
    auto cfg = harness::SuiteConfig::from_file(testkit::fixture("suites/benign_dom.json"));
    cfg.seeds = {0, 1};
    cfg.pass_k = {};
    auto serial = harness::build_report(harness::run_suite(cfg));
    cfg.jobs = 4;
    auto parallel = harness::build_report(harness::run_suite(cfg));
    EXPECT_EQ(serial.to_json().dump(), parallel.to_json().dump());
    EXPECT_EQ(serial.to_text(), parallel.to_text());
}

TEST(RunSuite, FailuresAreRecordedNotThrown) {
    auto dir = scratch("unknown-task");
    fs::create_directories(dir);
    auto s = read_json_file(testkit::fixture("scenarios/benign/natural_products.json"));
    s["id"] = "no-such-task";
    write_text_file(dir / "x.json", s.dump());
    harness::SuiteConfig cfg;
    cfg.scenarios = {dir / "x.json"};
    cfg.seeds = {0};
    auto r = harness::run_suite(cfg);
    ASSERT_EQ(r.runs.size(), 1u);
    EXPECT_EQ(r.runs[0].record.outcome, runtime::Outcome::PlanError);
    fs::remove_all(dir);
}

// Every run's total equals the sum of its components, and the suite sums runs.
TEST(RunSuite, LedgerAdditivity) {
    auto cfg = harness::SuiteConfig::from_file(testkit::fixture("suites/benign_consensus.json"));
    cfg.seeds = {0};
    auto result = harness::run_suite(cfg);
    std::map<std::string, runtime::CostTotals> summed;
    for (const auto& run : result.runs) {
        runtime::CostTotals parts;
        for (const auto& [name, c] : run.record.trace.cost_by_component()) {
            parts.calls += c.calls;
            parts.input_tokens += c.input_tokens;
            parts.output_tokens += c.output_tokens;
            auto& s = summed[name];
            s.calls += c.calls;
            s.input_tokens += c.input_tokens;
            s.output_tokens += c.output_tokens;
        }
        EXPECT_EQ(parts, run.record.trace.total_cost()) << run.row;
        EXPECT_EQ(run.costs, run.record.trace.cost_by_component()) << run.row;
    }
    EXPECT_EQ(harness::build_report(result).costs, summed);
    EXPECT_GT(summed.at("checker").calls, 0u);
}

TEST(Report, UitarsTextAndCollision) {
    auto rep = harness::report_from_path(testkit::fixture("matrices/uitars_n60.json"));
    const std::string txt = rep.to_text();
    EXPECT_NE(txt.find("Pass@5  39/60 (65.0%)"), std::string::npos) << txt;
    EXPECT_NE(txt.find("Pass@1  25/60 (41.7%)"), std::string::npos) << txt;

    auto dir = scratch("report");
    harness::write_report(rep, dir);
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    EXPECT_TRUE(fs::exists(dir / "report.txt"));
    EXPECT_THROW(harness::write_report(rep, dir), IoError);
    auto back = harness::report_from_path(dir);
    EXPECT_EQ(back.to_text(), txt);
    fs::remove_all(dir);
}

TEST(Report, LedgerText) {
    auto rep = harness::report_from_path(testkit::fixture("ledgers/osworld_17_tasks.json"));
    const std::string txt = rep.to_text();
    EXPECT_NE(txt.find("x1.88"), std::string::npos) << txt;
    EXPECT_NE(txt.find("x29.60"), std::string::npos) << txt;
}

TEST(Report, EmptyIsValid) {
    harness::MetricsReport empty;
    auto dir = scratch("empty");
    EXPECT_NO_THROW(harness::write_report(empty, dir));
    EXPECT_TRUE(read_json_file(dir / "report.json").is_object());
    fs::remove_all(dir);
}

}  // namespace
