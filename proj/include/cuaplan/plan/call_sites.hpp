#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cuaplan/plan/ast.hpp"

namespace cuaplan::plan {

// Statement paths: "/3" for the fourth top-level statement,
// "<p>/for/body/k", "<p>/if/<branch>/body/k", "<p>/if/else/k" for nested
// ones. A call site appends "#<site>".
std::string child_path(const std::string& parent, const std::string& step, std::size_t index);
std::string site_path(const std::string& stmt_path, int site);

struct CallSite {
    std::string path;  // statement path + "#" + site
    std::string callee;
    std::size_t arity = 0;
    bool operator==(const CallSite&) const = default;
};

struct CallSiteSet {
    std::vector<CallSite> entries;  // program order
    bool contains(const std::string& callee, const std::string& path) const;
    bool operator==(const CallSiteSet&) const = default;
};

CallSiteSet enumerate_call_sites(const Program& p);

// Call sites of a statement list rooted at `prefix` ("" for a program).
void collect_call_sites(const std::vector<Stmt>& body, const std::string& prefix,
                        std::vector<CallSite>& out);

// Pre-order visit of every expression in a statement, including nested
// statement bodies. The callback receives the path of the statement that
// owns the expression.
void walk_statements(
    const std::vector<Stmt>& body, const std::string& prefix,
    const std::function<void(const Stmt&, const std::string& path)>& on_stmt);
void walk_expr(const Expr& e, const std::function<void(const Expr&)>& visit);

}  // namespace cuaplan::plan
