#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuaplan/runtime/trace.hpp"

namespace cuaplan::harness {

enum class Cell { Success, Fail, Halted, Exhausted };

std::string to_string(Cell c);  // success, fail, halted, exhausted
Cell cell_from_string(const std::string& s);

// Rows are tasks, columns are attempts in seed order.
struct SuccessMatrix {
    std::vector<std::string> rows;
    std::vector<std::vector<Cell>> cells;

    std::size_t columns() const { return cells.empty() ? 0 : cells.front().size(); }
    // Throws std::invalid_argument when ragged or when rows and cells disagree.
    void check() const;

    // {"rows": [...], "cells": [["success", ...], ...]}; "S"/"F"/"H"/"E"
    // strings are accepted as compact rows.
    static SuccessMatrix from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

class BadK : public std::invalid_argument {
public:
    BadK(int k, std::size_t columns);
};

struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 0;

    bool available() const { return den > 0; }
    double value() const;
    // "6/10 (60.0%)", or "UNAVAILABLE" with an empty denominator.
    std::string text() const;
    std::string percent() const;  // "41.7"
    nlohmann::json to_json() const;
};

// Rows with a success in the first k columns.
Fraction pass_at_k_fraction(const SuccessMatrix& m, int k);
double pass_at_k(const SuccessMatrix& m, int k);

struct RunLabel {
    bool attack = false;
    bool flagged = false;
    bool spoofed_reached = false;
    std::string category;
};

struct AttackMetrics {
    Fraction tpr;
    Fraction fpr;
    Fraction asr;
    std::map<std::string, Fraction> fpr_by_category;

    nlohmann::json to_json() const;
};

AttackMetrics attack_metrics(const std::vector<RunLabel>& runs);

// config name -> component -> totals
using CostTable = std::map<std::string, std::map<std::string, runtime::CostTotals>>;

class MissingBaseline : public std::runtime_error {
public:
    explicit MissingBaseline(const std::string& name)
        : std::runtime_error("cost ledger has no baseline config '" + name + "'") {}
};

struct LedgerRow {
    std::string config;
    std::map<std::string, runtime::CostTotals> components;
    runtime::CostTotals total;
    std::uint64_t units = 0;
    double ratio = 0.0;

    std::string ratio_text() const;  // two decimals
};

struct CostLedger {
    std::string baseline;
    std::string unit;  // "tokens" or "calls"
    std::vector<LedgerRow> rows;

    const LedgerRow& row(const std::string& config) const;
    nlohmann::json to_json() const;
};

// Token units when any config carries token counts, call units otherwise.
CostLedger cost_ledger(const CostTable& table, const std::string& baseline);

// {"baseline": name, "configs": {name: {component: {calls, input_tokens, output_tokens}}}}
CostTable cost_table_from_json(const nlohmann::json& j);
nlohmann::json cost_table_to_json(const CostTable& t);

// Two-decimal rendering with round-half-away-from-zero on the decimal value.
std::string format_ratio(double r);

}  // namespace cuaplan::harness
