#include "cuaplan/harness/report.hpp"

#include <iomanip>
#include <sstream>

#include "cuaplan/util/files.hpp"

namespace cuaplan::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json totals_json(const runtime::CostTotals& t) {
    return {{"calls", t.calls}, {"input_tokens", t.input_tokens}, {"output_tokens", t.output_tokens}};
}

std::string trace_file_name(const RunSummary& r) {
    std::string name = r.row;
    for (char& c : name) {
        if (c == ':' || c == '/' || c == ' ') c = '_';
    }
    return name + "__s" + std::to_string(r.seed) + ".jsonl";
}

bool has_prefix(const json& j, const char* key) { return j.is_object() && j.contains(key); }

}  // namespace

json MetricsReport::to_json() const {
    json j = {{"title", title}};
    if (matrix) {
        json pk = json::array();
        for (int k : ks) {
            Fraction f = pass_at_k_fraction(*matrix, k);
            pk.push_back({{"k", k}, {"num", f.num}, {"den", f.den}, {"percent", f.percent()}, {"text", f.text()}});
        }
        j["pass_at_k"] = pk;
        j["matrix"] = matrix->to_json();
    }
    if (attack) j["attack"] = attack->to_json();
    json c = json::object();
    for (const auto& [name, t] : costs) c[name] = totals_json(t);
    j["costs"] = c;
    if (ledger) j["ledger"] = ledger->to_json();
    json rs = json::array();
    for (const auto& r : runs) {
        rs.push_back({{"row", r.row}, {"seed", r.seed}, {"outcome", r.record.label()}, {"flagged", r.flagged},
                      {"spoofed_reached", r.spoofed_reached}});
    }
    j["runs"] = rs;
    return j;
}

std::string MetricsReport::to_text() const {
    std::ostringstream os;
    os << "Report: " << (title.empty() ? "(untitled)" : title) << '\n';
    if (matrix) {
        os << "\nCumulative pass@k over " << matrix->rows.size() << " tasks\n";
        for (int k : ks) os << "  Pass@" << k << "  " << pass_at_k_fraction(*matrix, k).text() << '\n';
    }
    if (attack) {
        os << "\nAttack metrics\n";
        os << "  TPR  " << attack->tpr.text() << '\n';
        os << "  FPR  " << attack->fpr.text() << '\n';
        os << "  ASR  " << attack->asr.text() << '\n';
        for (const auto& [cat, f] : attack->fpr_by_category) {
            if (f.num > 0) os << "  FPR[" << cat << "]  " << f.text() << '\n';
        }
    }
    if (!costs.empty()) {
        os << "\nCosts by component\n";
        for (const auto& [name, t] : costs) {
            os << "  " << std::left << std::setw(14) << name << " calls=" << t.calls << " input=" << t.input_tokens
               << " output=" << t.output_tokens << '\n';
        }
    }
    if (ledger) {
        os << "\nCost ledger (" << ledger->unit << ", baseline " << ledger->baseline << ")\n";
        for (const auto& r : ledger->rows) {
            os << "  " << std::left << std::setw(28) << r.config << ' ' << std::right << std::setw(12) << r.units
               << "  x" << r.ratio_text() << '\n';
        }
    }
    if (!runs.empty()) {
        os << "\nRuns\n";
        for (const auto& r : runs) {
            os << "  " << r.row << " seed " << r.seed << "  " << r.record.label();
            if (r.flagged) os << "  flagged";
            if (r.spoofed_reached) os << "  spoofed";
            os << '\n';
        }
    }
    return os.str();
}

MetricsReport build_report(const SuiteResult& r) {
    MetricsReport m;
    m.title = r.config.name;
    m.matrix = r.matrix;
    m.ks = r.config.ks();
    m.runs = r.runs;
    std::vector<RunLabel> labels;
    for (const auto& run : r.runs) {
        labels.push_back(run.label());
        for (const auto& [name, t] : run.costs) {
            auto& acc = m.costs[name];
            acc.calls += t.calls;
            acc.input_tokens += t.input_tokens;
            acc.output_tokens += t.output_tokens;
        }
    }
    m.attack = attack_metrics(labels);
    return m;
}

namespace {

void absorb(MetricsReport& m, const json& j) {
    if (has_prefix(j, "cells")) {
        m.matrix = SuccessMatrix::from_json(j);
        if (j.contains("pass_k")) {
            m.ks = j.at("pass_k").get<std::vector<int>>();
        } else {
            m.ks.clear();
            for (std::size_t k = 1; k <= m.matrix->columns(); ++k) m.ks.push_back(static_cast<int>(k));
        }
        if (m.title.empty()) m.title = j.value("name", "");
    } else if (has_prefix(j, "configs")) {
        m.ledger = cost_ledger(cost_table_from_json(j), j.at("baseline").get<std::string>());
        if (m.title.empty()) m.title = j.value("name", "");
    } else if (has_prefix(j, "runs")) {
        std::vector<RunLabel> labels;
        for (const auto& r : j.at("runs")) {
            m.runs.push_back(RunSummary::from_json(r));
            labels.push_back(m.runs.back().label());
            for (const auto& [name, t] : m.runs.back().costs) {
                auto& acc = m.costs[name];
                acc.calls += t.calls;
                acc.input_tokens += t.input_tokens;
                acc.output_tokens += t.output_tokens;
            }
        }
        m.attack = attack_metrics(labels);
        if (m.title.empty()) m.title = j.value("name", "");
    } else {
        throw std::invalid_argument("unrecognized report input (expected cells, configs or runs)");
    }
}

}  // namespace

MetricsReport report_from_path(const fs::path& input) {
    MetricsReport m;
    if (fs::is_directory(input)) {
        bool any = false;
        for (const char* name : {"matrix.json", "runs.json", "ledger.json"}) {
            if (fs::exists(input / name)) {
                absorb(m, read_json_file(input / name));
                any = true;
            }
        }
        if (!any) throw IoError(input, "no matrix.json, runs.json or ledger.json to report on");
        return m;
    }
    absorb(m, read_json_file(input));
    return m;
}

void write_report(const MetricsReport& report, const fs::path& out_dir) {
    std::error_code ec;
    if (fs::exists(out_dir, ec) && !(fs::is_directory(out_dir, ec) && fs::is_empty(out_dir, ec))) {
        throw IoError(out_dir, "report directory already exists");
    }
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError(out_dir, ec.message());
    write_text_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
    write_text_file(out_dir / "report.txt", report.to_text());
    if (report.matrix) {
        json mj = report.matrix->to_json();
        mj["pass_k"] = report.ks;
        mj["name"] = report.title;
        write_text_file(out_dir / "matrix.json", mj.dump(2) + "\n");
    }
    if (!report.runs.empty()) {
        json rs = json::array();
        for (const auto& r : report.runs) rs.push_back(r.to_json());
        write_text_file(out_dir / "runs.json", json{{"name", report.title}, {"runs", rs}}.dump(2) + "\n");
        const fs::path traces = out_dir / "traces";
        fs::create_directories(traces, ec);
        if (ec) throw IoError(traces, ec.message());
        for (const auto& r : report.runs) {
            if (r.record.trace.size() > 0) write_text_file(traces / trace_file_name(r), r.record.trace.to_jsonl());
        }
    }
    if (report.ledger) {
        // Round-trips through report_from_path.
        CostTable t;
        for (const auto& row : report.ledger->rows) t[row.config] = row.components;
        json lj = cost_table_to_json(t);
        lj["baseline"] = report.ledger->baseline;
        write_text_file(out_dir / "ledger.json", lj.dump(2) + "\n");
    }
}

}  // namespace cuaplan::harness
