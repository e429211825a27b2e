#include "cuaplan/runtime/interpreter.hpp"

#include "cuaplan/env/env.hpp"
#include "cuaplan/plan/call_sites.hpp"
#include "cuaplan/plan/validate.hpp"
#include "cuaplan/util/text.hpp"

namespace cuaplan::runtime {

using namespace plan;

namespace {

Provenance join_all(const std::vector<Value>& vs) {
    Provenance p;
    for (const auto& v : vs) p.insert(v.prov.begin(), v.prov.end());
    return p;
}

void stamp(Value& v, const Provenance& p) {
    v.prov.insert(p.begin(), p.end());
    if (auto* l = std::get_if<Value::List>(&v.payload)) {
        for (auto& item : *l) stamp(item, p);
    } else if (auto* r = std::get_if<Record>(&v.payload)) {
        for (auto& item : r->values) stamp(item, p);
    }
}

std::string print_text(const Value& v) {
    if (const auto* s = v.as_text()) return *s;
    return v.render();
}

// Shared pure-expression evaluation. `call` handles CallExpr nodes.
class Evaluator {
public:
    using CallFn = std::function<Value(const CallExpr&)>;
    using ReadFn = std::function<const Value&(const std::string&)>;

    Evaluator(ReadFn read, CallFn call) : read_(std::move(read)), call_(std::move(call)) {}

    Value eval(const Expr& e) {
        return std::visit([&](const auto& n) { return node(n); }, e.node);
    }

    static bool truth(const Value& v, const char* what) {
        if (const bool* b = v.as_bool()) return *b;
        throw PlanError(std::string(what) + " must be a bool, got " + v.kind_name());
    }

private:
    Value node(const NoneLit&) { return Value::none(); }
    Value node(const BoolLit& n) { return Value::boolean(n.value); }
    Value node(const IntLit& n) { return Value::number(static_cast<double>(n.value)); }
    Value node(const FloatLit& n) { return Value::number(n.value); }
    Value node(const StrLit& n) { return Value::text(n.value); }
    Value node(const KeyLit& n) { return Value::text(n.name); }
    Value node(const ListLit& n) { return seq(n.items); }
    Value node(const TupleLit& n) { return seq(n.items); }
    Value node(const NameRef& n) { return read_(n.name); }
    Value node(const AttrAccess& n) {
        Value base = eval(*n.base);
        const Record* r = base.as_record();
        if (!r) throw PlanError("'." + n.field + "' read from a " + base.kind_name() + " value");
        const Value* f = r->get(n.field);
        if (!f) throw PlanError("result has no field '" + n.field + "'");
        Value out = *f;
        out.prov = join(out.prov, base.prov);
        return out;
    }
    Value node(const CallExpr& n) { return call_(n); }
    Value node(const RangeExpr& n) {
        Value count = eval(*n.count);
        const double* d = count.as_number();
        if (!d || *d < 0) throw PlanError("range() needs a non-negative count");
        Value::List items;
        for (int i = 0; i < static_cast<int>(*d); ++i) items.push_back(Value::number(i));
        return Value::list(std::move(items), count.prov);
    }
    Value node(const Compare& n) {
        Value lhs = eval(*n.lhs);
        switch (n.op) {
            case CmpOp::IsNone: return Value::boolean(lhs.is_none(), lhs.prov);
            case CmpOp::IsNotNone: return Value::boolean(!lhs.is_none(), lhs.prov);
            case CmpOp::Eq:
            case CmpOp::Ne: {
                Value rhs = eval(*n.rhs);
                bool eq = lhs.same_payload(rhs);
                return Value::boolean(n.op == CmpOp::Eq ? eq : !eq, join(lhs.prov, rhs.prov));
            }
        }
        throw PlanError("unsupported comparison");
    }
    Value node(const BoolOp& n) {
        // Short-circuit: operands after the deciding one are never evaluated.
        Provenance p;
        const bool is_and = n.kind == BoolKind::And;
        for (const auto& operand : n.operands) {
            Value v = eval(operand);
            p = join(p, v.prov);
            bool t = truth(v, is_and ? "operand of 'and'" : "operand of 'or'");
            if (is_and && !t) return Value::boolean(false, p);
            if (!is_and && t) return Value::boolean(true, p);
        }
        return Value::boolean(is_and, p);
    }
    Value node(const NotOp& n) {
        Value v = eval(*n.operand);
        return Value::boolean(!truth(v, "operand of 'not'"), v.prov);
    }

    Value seq(const std::vector<Expr>& items) {
        Value::List out;
        for (const auto& x : items) out.push_back(eval(x));
        Provenance p = join_all(out);
        return Value::list(std::move(out), p);
    }

    ReadFn read_;
    CallFn call_;
};

}  // namespace

Value eval_guard(const Expr& e, const Bindings& bindings) {
    Evaluator ev(
        [&](const std::string& name) -> const Value& {
            auto it = bindings.find(name);
            if (it == bindings.end()) throw PlanError("name '" + name + "' is not bound");
            return it->second;
        },
        [](const CallExpr& c) -> Value { throw PlanError("call to '" + c.callee + "' inside a pure guard"); });
    Value v = ev.eval(e);
    Evaluator::truth(v, "guard");
    return v;
}

Interpreter::Interpreter(tools::ToolBroker& broker, const ExecOptions& opts)
    : broker_(broker),
      manifest_(opts.manifest ? opts.manifest : &tools::ToolManifest::builtin()),
      meter_(opts.budgets) {}

void Interpreter::stop(Outcome o, const std::string& detail) {
    if (stopped_) return;
    stopped_ = true;
    record_.outcome = o;
    record_.detail = detail;
    TraceEvent ev;
    ev.kind = EventKind::Halt;
    ev.status = to_string(o);
    ev.detail = detail;
    record_.trace.append(std::move(ev));
}

void Interpreter::halt(Outcome o, const std::string& detail) {
    stop(o, detail);
    throw Halt{};
}

bool Interpreter::truth(const Value& v, const char* what) const { return Evaluator::truth(v, what); }

bool Interpreter::run(const std::vector<Stmt>& body, const std::string& prefix) {
    if (stopped_) return false;
    try {
        exec_body(body, prefix);
    } catch (const Halt&) {
    } catch (const PlanError& e) {
        stop(Outcome::PlanError, e.what());
    }
    return !stopped_;
}

void Interpreter::exec_body(const std::vector<Stmt>& body, const std::string& prefix) {
    for (std::size_t i = 0; i < body.size(); ++i) exec(body[i], child_path(prefix, "", i));
}

void Interpreter::exec(const Stmt& s, const std::string& path) {
    if (meter_.charge_statement() != Exhaustion::None) {
        TraceEvent ev;
        ev.kind = EventKind::Budget;
        ev.site = path;
        ev.status = "EXHAUSTED";
        ev.detail = to_string(Exhaustion::WallLimit);
        record_.trace.append(std::move(ev));
        halt(Outcome::BudgetExhausted, to_string(Exhaustion::WallLimit));
    }
    if (const auto* a = s.as<Assign>()) {
        bindings_[a->target] = eval(a->value, path);
    } else if (const auto* e = s.as<ExprStmt>()) {
        eval(e->expr, path);
    } else if (const auto* p = s.as<Print>()) {
        std::vector<Value> vals;
        for (const auto& x : p->args) vals.push_back(eval(x, path));
        TraceEvent ev;
        ev.kind = EventKind::Print;
        ev.site = path;
        ev.provenance = join_all(vals);
        for (std::size_t i = 0; i < vals.size(); ++i) ev.detail += (i ? " " : "") + print_text(vals[i]);
        record_.trace.append(std::move(ev));
    } else if (const auto* node = s.as<If>()) {
        for (std::size_t b = 0; b < node->branches.size(); ++b) {
            Value g = eval(node->branches[b].guard, path);
            if (truth(g, "if guard")) {
                exec_body(node->branches[b].body, path + "/if/" + std::to_string(b) + "/body");
                return;
            }
        }
        exec_body(node->else_body, path + "/if/else");
    } else if (const auto* loop = s.as<For>()) {
        Value it = eval(loop->iterable, path);
        const auto* items = it.as_list();
        if (!items) throw PlanError("for loop over a " + it.kind_name() + " value");
        const std::string body_prefix = path + "/for/body";
        for (const auto& item : *items) {
            if (loop->targets.size() == 1) {
                Value v = item;
                v.prov = join(v.prov, it.prov);
                bindings_[loop->targets[0]] = v;
            } else {
                const auto* parts = item.as_list();
                if (!parts || parts->size() != loop->targets.size()) {
                    throw PlanError("cannot unpack loop item into " + std::to_string(loop->targets.size()) + " names");
                }
                for (std::size_t k = 0; k < parts->size(); ++k) {
                    Value v = (*parts)[k];
                    v.prov = join(v.prov, join(item.prov, it.prov));
                    bindings_[loop->targets[k]] = v;
                }
            }
            exec_body(loop->body, body_prefix);
        }
    }
}

Value Interpreter::eval(const Expr& e, const std::string& path) {
    Evaluator ev(
        [&](const std::string& name) -> const Value& {
            auto it = bindings_.find(name);
            if (it == bindings_.end()) throw PlanError("name '" + name + "' is not bound");
            if (on_read) on_read(name);
            if (stopped_) throw Halt{};
            return it->second;
        },
        [&](const CallExpr& c) { return call_tool(c, path); });
    return ev.eval(e);
}

Value Interpreter::call_tool(const CallExpr& c, const std::string& path) {
    // Argument evaluation happens first, left to right, as in Python.
    std::vector<Value> pos;
    for (const auto& a : c.args) pos.push_back(eval(a, path));
    std::vector<Value> kw;
    for (const auto& a : c.kw_values) kw.push_back(eval(a, path));

    if (c.callee == "Instruction") {
        Record r;
        const auto& params = tools::instruction_params();
        if (pos.size() > params.size()) throw PlanError("Instruction takes at most 2 arguments");
        for (std::size_t i = 0; i < pos.size(); ++i) r.set(params[i], pos[i]);
        for (std::size_t i = 0; i < kw.size(); ++i) r.set(c.kw_names[i], kw[i]);
        if (!r.get("text")) throw PlanError("Instruction needs text");
        Provenance p = join(join_all(pos), join_all(kw));
        return Value::record(std::move(r), p);
    }

    const tools::ToolSpec* spec = manifest_->find(c.callee);
    if (!spec) throw PlanError("'" + c.callee + "' is not a tool");
    tools::ToolCall call;
    call.spec = spec;
    call.site = site_path(path, c.site);
    if (pos.size() > spec->params.size()) throw PlanError("too many arguments to " + c.callee);
    for (std::size_t i = 0; i < pos.size(); ++i) call.args[spec->params[i]] = pos[i];
    for (std::size_t i = 0; i < kw.size(); ++i) {
        if (!spec->has_param(c.kw_names[i])) throw PlanError(c.callee + " has no parameter '" + c.kw_names[i] + "'");
        call.args[c.kw_names[i]] = kw[i];
    }

    Exhaustion ex = meter_.charge(*spec);
    if (ex != Exhaustion::None) {
        TraceEvent ev;
        ev.kind = EventKind::Budget;
        ev.callee = c.callee;
        ev.site = call.site;
        ev.status = "EXHAUSTED";
        ev.detail = to_string(ex);
        record_.trace.append(std::move(ev));
        halt(Outcome::BudgetExhausted, to_string(ex));
    }
    call.index = ++calls_;

    tools::ToolReply reply = broker_.call(call);
    for (auto& ev : reply.before) {
        ev.call = call.index;
        ev.site = call.site;
        record_.trace.append(std::move(ev));
    }

    Provenance prov = {call.index};
    for (const auto& [name, v] : call.args) prov = join(prov, v.prov);
    Value result = reply.result;
    stamp(result, prov);

    TraceEvent ev;
    ev.kind = EventKind::ToolCall;
    ev.callee = c.callee;
    ev.site = call.site;
    ev.call = call.index;
    for (const auto& [name, v] : call.args) ev.arg_digests.push_back(name + "=" + v.payload_digest());
    ev.result_digest = result.payload_digest();
    ev.provenance = prov;
    ev.costs = reply.costs;
    ev.status = reply.halted ? "BLOCKED" : reply.status;
    record_.trace.append(std::move(ev));
    for (auto& after : reply.after) {
        after.call = call.index;
        record_.trace.append(std::move(after));
    }

    if (reply.halted) halt(Outcome::HaltedByDefense, reply.halt_reason);
    if (reply.terminal == env::Terminal::Done) {
        if (env::evaluate_goal(broker_.env())) halt(Outcome::Success, "");
        halt(Outcome::Fail, "mark_done without the goal met");
    }
    if (reply.terminal == env::Terminal::Fail) halt(Outcome::Fail, "mark_fail");
    return result;
}

RunRecord Interpreter::finish() {
    if (!stopped_) stop(Outcome::Fail, "plan ended without mark_done");
    const auto& env = broker_.env();
    record_.final_env_digest = env::snapshot_digest(env);
    record_.final_frame = env.current_frame;
    record_.frames_visited = env.history;
    record_.bindings = bindings_;
    record_.tool_calls = meter_.tool_calls();
    record_.gui_steps = meter_.gui_steps();
    return std::move(record_);
}

RunRecord execute_plan(const Program& p, tools::ToolBroker& broker, const ExecOptions& opts) {
    Interpreter in(broker, opts);
    TraceEvent plan_ev;
    plan_ev.kind = EventKind::Plan;
    plan_ev.callee = "planner";
    plan_ev.detail = p.source_digest;
    if (opts.plan_cost) plan_ev.costs.push_back(*opts.plan_cost);
    in.trace().append(std::move(plan_ev));

    ValidationReport report = validate_plan(p, in.manifest().names(), in.manifest());
    if (!report.ok) {
        const auto& v = report.violations.front();
        in.stop(Outcome::PlanError, v.rule + " at " + v.path + ": " + v.message);
        return in.finish();
    }
    in.run(p.statements, "");
    return in.finish();
}

RunRecord execute_plan(const Program& p, tools::ToolBroker& broker, const Budgets& budgets) {
    ExecOptions opts;
    opts.budgets = budgets;
    return execute_plan(p, broker, opts);
}

}  // namespace cuaplan::runtime
