#pragma once

#include <nlohmann/json.hpp>

#include <set>
#include <string>
#include <vector>

#include "cuaplan/plan/ast.hpp"
#include "cuaplan/tools/manifest.hpp"

namespace cuaplan::plan {

struct Finding {
    std::string path;
    std::string rule;
    std::string message;
    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    bool ok = true;  // exactly when violations is empty
    std::vector<Finding> violations;
    std::vector<Finding> lints;  // advisory only

    nlohmann::json to_json() const;
};

// Result-record fields a plan may read.
const std::set<std::string>& readable_fields();

ValidationReport validate_plan(const Program& p, const std::set<std::string>& whitelist,
                               const tools::ToolManifest& manifest = tools::ToolManifest::builtin());

// Validate with the builtin manifest's full tool list as whitelist.
ValidationReport validate_plan(const Program& p);

// Same checks over a statement list mounted at `prefix`; lets the
// iterative executor validate one turn at a time while remembering which
// names hold list literals across turns.
ValidationReport validate_statements(const std::vector<Stmt>& body, const std::string& prefix,
                                     const std::set<std::string>& whitelist,
                                     const tools::ToolManifest& manifest,
                                     std::set<std::string>* list_bound_names = nullptr);

}  // namespace cuaplan::plan
