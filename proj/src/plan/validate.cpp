#include "cuaplan/plan/validate.hpp"

#include "cuaplan/plan/call_sites.hpp"

namespace cuaplan::plan {

namespace {

const std::set<std::string>& observe_tools() {
    static const std::set<std::string> s = {"summarize_screenshot_content", "get_page_elements",
                                            "get_page_text"};
    return s;
}

const std::set<std::string>& act_tools() {
    static const std::set<std::string> s = {"left_single", "type_text"};
    return s;
}

bool is_finder(const std::string& callee) {
    return callee == "find" || callee == "find_element_by_text";
}

std::string other_finder(const std::string& callee) {
    return callee == "find" ? "find_element_by_text" : "find";
}

class Validator {
public:
    Validator(const std::set<std::string>& whitelist, const tools::ToolManifest& manifest,
              std::set<std::string>& list_bound)
        : whitelist_(whitelist), manifest_(manifest), list_bound_(list_bound) {}

    ValidationReport run(const std::vector<Stmt>& body, const std::string& prefix) {
        block(body, prefix, false);
        report_.ok = report_.violations.empty();
        return std::move(report_);
    }

private:
    void violation(const std::string& path, const std::string& rule, const std::string& msg) {
        report_.violations.push_back({path, rule, msg});
    }
    void lint(const std::string& path, const std::string& rule, const std::string& msg) {
        report_.lints.push_back({path, rule, msg});
    }

    // Statement-owned expressions, with the observe/act bookkeeping.
    void exprs(const std::vector<const Expr*>& es, const std::string& path, bool& observed) {
        for (const Expr* e : es) {
            walk_expr(*e, [&](const Expr& x) { check_expr(x, path, observed); });
        }
    }

    void check_expr(const Expr& x, const std::string& path, bool& observed) {
        if (const auto* a = x.as<AttrAccess>()) {
            if (!readable_fields().count(a->field)) {
                violation(path, "unknown-field", "field '" + a->field + "' is not a result-record field");
            }
        } else if (const auto* r = x.as<RangeExpr>()) {
            if (r != current_range_) {
                violation(path, "misplaced-range", "range() is only allowed as a loop iterable");
            }
        } else if (const auto* c = x.as<CallExpr>()) {
            std::string where = site_path(path, c->site);
            check_call(*c, where);
            if (observe_tools().count(c->callee)) observed = true;
            if (act_tools().count(c->callee) && !observed) {
                lint(where, "act-before-observe",
                     "'" + c->callee + "' runs before any observation in this block or its ancestors");
            }
        }
    }

    void check_arguments(const CallExpr& c, const std::string& where,
                         const std::vector<std::string>& params, std::size_t required) {
        if (c.args.size() > params.size()) {
            violation(where, "arity",
                      "'" + c.callee + "' takes at most " + std::to_string(params.size()) +
                          " positional arguments, got " + std::to_string(c.args.size()));
        }
        std::set<std::string> supplied;
        for (std::size_t i = 0; i < c.args.size() && i < params.size(); ++i) supplied.insert(params[i]);
        for (const auto& k : c.kw_names) {
            bool known = false;
            for (const auto& p : params) known = known || p == k;
            if (!known) {
                violation(where, "unknown-argument", "'" + c.callee + "' has no parameter '" + k + "'");
            } else if (!supplied.insert(k).second) {
                violation(where, "arity", "'" + c.callee + "' got parameter '" + k + "' twice");
            }
        }
        for (std::size_t i = 0; i < required && i < params.size(); ++i) {
            if (!supplied.count(params[i])) {
                violation(where, "arity", "'" + c.callee + "' is missing required argument '" + params[i] + "'");
            }
        }
    }

    void check_call(const CallExpr& c, const std::string& where) {
        if (c.callee == "Instruction") {
            check_arguments(c, where, tools::instruction_params(), 1);
            return;
        }
        if (!whitelist_.count(c.callee)) {
            violation(where, "unknown-callee", "'" + c.callee + "' is not a whitelisted tool");
            return;
        }
        const tools::ToolSpec* spec = manifest_.find(c.callee);
        if (spec == nullptr) {
            violation(where, "unknown-callee", "'" + c.callee + "' has no manifest entry");
            return;
        }
        // The outer length= duplicated onto summarize is accepted as-is.
        check_arguments(c, where, spec->params, spec->required);
    }

    bool bounded_iterable(const Expr& it) const {
        if (it.as<ListLit>() || it.as<TupleLit>()) return true;
        if (const auto* n = it.as<NameRef>()) return list_bound_.count(n->name) > 0;
        if (const auto* r = it.as<RangeExpr>()) {
            const auto* lit = r->count->as<IntLit>();
            return lit != nullptr && lit->value >= 0;
        }
        return false;
    }

    void block(const std::vector<Stmt>& body, const std::string& prefix, bool observed) {
        for (std::size_t i = 0; i < body.size(); ++i) {
            const Stmt& s = body[i];
            std::string path = child_path(prefix, "", i);
            if (const auto* a = s.as<Assign>()) {
                exprs({&a->value}, path, observed);
                if (a->value.as<ListLit>() || a->value.as<TupleLit>()) {
                    list_bound_.insert(a->target);
                } else {
                    list_bound_.erase(a->target);
                }
                if (const auto* c = a->value.as<CallExpr>(); c && is_finder(c->callee)) {
                    if (!has_fallback(body, i + 1, a->target, other_finder(c->callee))) {
                        lint(site_path(path, c->site), "no-dual-find",
                             "'" + a->target + "' from " + c->callee + " has no fallback to " +
                                 other_finder(c->callee));
                    }
                }
            } else if (const auto* e = s.as<ExprStmt>()) {
                exprs({&e->expr}, path, observed);
            } else if (const auto* p = s.as<Print>()) {
                std::vector<const Expr*> es;
                for (const auto& x : p->args) es.push_back(&x);
                exprs(es, path, observed);
            } else if (const auto* node = s.as<If>()) {
                for (std::size_t b = 0; b < node->branches.size(); ++b) {
                    exprs({&node->branches[b].guard}, path, observed);
                }
                for (std::size_t b = 0; b < node->branches.size(); ++b) {
                    block(node->branches[b].body, path + "/if/" + std::to_string(b) + "/body", observed);
                }
                block(node->else_body, path + "/if/else", observed);
            } else if (const auto* loop = s.as<For>()) {
                if (!bounded_iterable(loop->iterable)) {
                    violation(path, "unbounded-loop",
                              "loop iterable must be a list literal, a name bound to one, or range(<int>)");
                }
                current_range_ = loop->iterable.as<RangeExpr>();
                exprs({&loop->iterable}, path, observed);
                current_range_ = nullptr;
                for (const auto& t : loop->targets) list_bound_.erase(t);
                block(loop->body, path + "/for/body", observed);
            }
        }
    }

    // Looks for `if <name>.start is None: <name> = <other>(...)` later in
    // the same block.
    static bool has_fallback(const std::vector<Stmt>& body, std::size_t from,
                             const std::string& name, const std::string& other) {
        for (std::size_t j = from; j < body.size(); ++j) {
            const auto* node = body[j].as<If>();
            if (node == nullptr) continue;
            for (const auto& br : node->branches) {
                const auto* cmp = br.guard.as<Compare>();
                if (cmp == nullptr || cmp->op != CmpOp::IsNone) continue;
                const auto* attr = cmp->lhs->as<AttrAccess>();
                if (attr == nullptr || attr->field != "start") continue;
                const auto* base = attr->base->as<NameRef>();
                if (base == nullptr || base->name != name) continue;
                for (const auto& st : br.body) {
                    const auto* a = st.as<Assign>();
                    if (a == nullptr || a->target != name) continue;
                    const auto* c = a->value.as<CallExpr>();
                    if (c != nullptr && c->callee == other) return true;
                }
            }
        }
        return false;
    }

    const std::set<std::string>& whitelist_;
    const tools::ToolManifest& manifest_;
    std::set<std::string>& list_bound_;
    const RangeExpr* current_range_ = nullptr;
    ValidationReport report_;
};

nlohmann::json findings_json(const std::vector<Finding>& fs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : fs) arr.push_back({{"path", f.path}, {"rule", f.rule}, {"message", f.message}});
    return arr;
}

}  // namespace

const std::set<std::string>& readable_fields() {
    static const std::set<std::string> f = {"status", "start", "text", "done"};
    return f;
}

nlohmann::json ValidationReport::to_json() const {
    return {{"ok", ok}, {"violations", findings_json(violations)}, {"lints", findings_json(lints)}};
}

ValidationReport validate_statements(const std::vector<Stmt>& body, const std::string& prefix,
                                     const std::set<std::string>& whitelist,
                                     const tools::ToolManifest& manifest,
                                     std::set<std::string>* list_bound_names) {
    std::set<std::string> local;
    std::set<std::string>& bound = list_bound_names ? *list_bound_names : local;
    return Validator(whitelist, manifest, bound).run(body, prefix);
}

ValidationReport validate_plan(const Program& p, const std::set<std::string>& whitelist,
                               const tools::ToolManifest& manifest) {
    return validate_statements(p.statements, "", whitelist, manifest);
}

ValidationReport validate_plan(const Program& p) {
    const auto& m = tools::ToolManifest::builtin();
    return validate_plan(p, m.names(), m);
}

}  // namespace cuaplan::plan
