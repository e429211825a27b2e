#include "cuaplan/plan/call_sites.hpp"

#include <algorithm>

namespace cuaplan::plan {

std::string child_path(const std::string& parent, const std::string& step, std::size_t index) {
    std::string out = parent;
    if (!step.empty()) out += "/" + step;
    out += "/" + std::to_string(index);
    return out;
}

std::string site_path(const std::string& stmt_path, int site) {
    return stmt_path + "#" + std::to_string(site);
}

bool CallSiteSet::contains(const std::string& callee, const std::string& path) const {
    return std::any_of(entries.begin(), entries.end(), [&](const CallSite& c) {
        return c.callee == callee && c.path == path;
    });
}

void walk_expr(const Expr& e, const std::function<void(const Expr&)>& visit) {
    visit(e);
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ListLit> || std::is_same_v<T, TupleLit>) {
                for (const auto& x : n.items) walk_expr(x, visit);
            } else if constexpr (std::is_same_v<T, AttrAccess>) {
                walk_expr(*n.base, visit);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                for (const auto& x : n.args) walk_expr(x, visit);
                for (const auto& x : n.kw_values) walk_expr(x, visit);
            } else if constexpr (std::is_same_v<T, RangeExpr>) {
                walk_expr(*n.count, visit);
            } else if constexpr (std::is_same_v<T, Compare>) {
                walk_expr(*n.lhs, visit);
                walk_expr(*n.rhs, visit);
            } else if constexpr (std::is_same_v<T, BoolOp>) {
                for (const auto& x : n.operands) walk_expr(x, visit);
            } else if constexpr (std::is_same_v<T, NotOp>) {
                walk_expr(*n.operand, visit);
            }
        },
        e.node);
}

void walk_statements(const std::vector<Stmt>& body, const std::string& prefix,
                     const std::function<void(const Stmt&, const std::string&)>& on_stmt) {
    for (std::size_t i = 0; i < body.size(); ++i) {
        const Stmt& s = body[i];
        std::string path = child_path(prefix, "", i);
        on_stmt(s, path);
        if (const auto* node = s.as<If>()) {
            for (std::size_t b = 0; b < node->branches.size(); ++b) {
                walk_statements(node->branches[b].body,
                                path + "/if/" + std::to_string(b) + "/body", on_stmt);
            }
            walk_statements(node->else_body, path + "/if/else", on_stmt);
        } else if (const auto* loop = s.as<For>()) {
            walk_statements(loop->body, path + "/for/body", on_stmt);
        }
    }
}

namespace {

// Expressions owned directly by a statement (not by its nested bodies),
// in source order.
std::vector<const Expr*> own_exprs(const Stmt& s) {
    std::vector<const Expr*> out;
    if (const auto* a = s.as<Assign>()) {
        out.push_back(&a->value);
    } else if (const auto* e = s.as<ExprStmt>()) {
        out.push_back(&e->expr);
    } else if (const auto* p = s.as<Print>()) {
        for (const auto& x : p->args) out.push_back(&x);
    } else if (const auto* i = s.as<If>()) {
        for (const auto& b : i->branches) out.push_back(&b.guard);
    } else if (const auto* f = s.as<For>()) {
        out.push_back(&f->iterable);
    }
    return out;
}

}  // namespace

void collect_call_sites(const std::vector<Stmt>& body, const std::string& prefix,
                        std::vector<CallSite>& out) {
    walk_statements(body, prefix, [&](const Stmt& s, const std::string& path) {
        for (const Expr* e : own_exprs(s)) {
            walk_expr(*e, [&](const Expr& x) {
                if (const auto* c = x.as<CallExpr>()) {
                    out.push_back(CallSite{site_path(path, c->site), c->callee, c->arity()});
                }
            });
        }
    });
}

CallSiteSet enumerate_call_sites(const Program& p) {
    CallSiteSet set;
    collect_call_sites(p.statements, "", set.entries);
    return set;
}

}  // namespace cuaplan::plan
