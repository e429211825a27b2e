#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cuaplan/harness/metrics.hpp"
#include "cuaplan/harness/suite.hpp"

namespace cuaplan::harness {

struct MetricsReport {
    std::string title;
    std::optional<SuccessMatrix> matrix;
    std::vector<int> ks;
    std::optional<AttackMetrics> attack;
    std::map<std::string, runtime::CostTotals> costs;  // summed over runs
    std::optional<CostLedger> ledger;
    std::vector<RunSummary> runs;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

MetricsReport build_report(const SuiteResult& r);

// Input is a directory holding any of matrix.json, runs.json, ledger.json,
// or a single such file (kind detected from its keys).
MetricsReport report_from_path(const std::filesystem::path& input);

// Writes report.json, report.txt, runs.json, matrix.json and one trace per
// run under out_dir. An existing non-empty out_dir is an IoError.
void write_report(const MetricsReport& report, const std::filesystem::path& out_dir);

}  // namespace cuaplan::harness
