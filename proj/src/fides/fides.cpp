#include "cuaplan/fides/fides.hpp"

#include <set>

#include "cuaplan/plan/parser.hpp"
#include "cuaplan/plan/validate.hpp"
#include "cuaplan/util/digest.hpp"

namespace cuaplan::fides {

using nlohmann::json;
using runtime::Outcome;

std::string RedactedTranscript::render() const {
    std::string out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        out += "[" + std::to_string(i + 1) + "] " + turns[i].statement;
        if (!turns[i].shown.empty()) out += "\n    -> " + turns[i].shown;
        out += "\n";
    }
    return out;
}

json RedactedTranscript::to_json() const {
    json arr = json::array();
    for (const auto& t : turns) arr.push_back({{"statement", t.statement}, {"result", t.shown}});
    return {{"turns", arr}};
}

RedactedTranscript redact(const std::vector<HistoryEntry>& history, bool relaxation) {
    RedactedTranscript out;
    int n = 0;
    for (const auto& h : history) {
        TranscriptTurn t;
        t.statement = h.statement;
        if (h.value) {
            const runtime::Value& v = *h.value;
            if (v.prov.empty()) {
                t.shown = v.render();
            } else if (relaxation && v.as_bool()) {
                t.shown = *v.as_bool() ? "True" : "False";
            } else {
                t.shown = "<VAR" + std::to_string(++n) + ": redacted>";
            }
        }
        out.turns.push_back(std::move(t));
    }
    return out;
}

bool VariableStore::read(const std::string& name) { return ++counts_[name] <= max_reuse_; }

int VariableStore::count(const std::string& name) const {
    auto it = counts_.find(name);
    return it == counts_.end() ? 0 : it->second;
}

FidesResult fides_run(const std::string& task, const oracles::PlannerOracle& planner, tools::ToolBroker& broker,
                      const FidesOptions& opts) {
    FidesResult out;
    runtime::ExecOptions exec;
    exec.budgets = opts.budgets;
    runtime::Interpreter in(broker, exec);
    VariableStore store(opts.max_variable_reuse);
    in.on_read = [&](const std::string& name) {
        auto it = in.bindings().find(name);
        if (it == in.bindings().end() || it->second.prov.empty()) return;
        if (!store.read(name)) {
            in.stop(Outcome::ReuseExceeded, "variable '" + name + "' referenced " + std::to_string(store.count(name)) +
                                                " times (cap " + std::to_string(store.max_reuse()) + ")");
        }
    };

    std::vector<HistoryEntry> history;
    std::set<std::string> list_names;
    const auto whitelist = in.manifest().names();
    const int max_turns = opts.budgets.max_tool_calls;
    int turn = 0;
    while (!in.stopped()) {
        if (turn >= max_turns) {
            runtime::TraceEvent ev;
            ev.kind = runtime::EventKind::Budget;
            ev.status = "EXHAUSTED";
            ev.detail = "max_turn";
            in.trace().append(std::move(ev));
            in.stop(Outcome::BudgetExhausted, "max_turn");
            break;
        }
        RedactedTranscript view = redact(history, opts.relaxation);
        out.planner_views.push_back(view.render());

        oracles::PlannerRequest req;
        req.task_id = opts.task_id;
        req.task = task;
        req.seed = opts.seed;
        req.mode = oracles::PlannerMode::FidesTurn;
        req.transcript = out.planner_views.back();
        req.turn = turn;
        oracles::PlannerReply reply = planner.plan(req);

        runtime::TraceEvent plan_ev;
        plan_ev.kind = runtime::EventKind::Plan;
        plan_ev.callee = "planner";
        plan_ev.detail = sha256_hex(reply.text).substr(0, 16);
        plan_ev.costs.push_back(reply.cost);
        in.trace().append(std::move(plan_ev));

        const std::string prefix = "/t" + std::to_string(turn);
        ++turn;
        plan::Program p;
        try {
            p = plan::parse_plan(reply.text);
        } catch (const std::exception& e) {
            in.stop(Outcome::PlanError, std::string("turn ") + std::to_string(turn) + ": " + e.what());
            break;
        }
        if (p.statements.size() != 1 || !(p.statements[0].as<plan::Assign>() || p.statements[0].as<plan::ExprStmt>())) {
            in.stop(Outcome::PlanError, "turn " + std::to_string(turn) + ": expected one assignment or expression");
            break;
        }
        auto report = plan::validate_statements(p.statements, prefix, whitelist, in.manifest(), &list_names);
        if (!report.ok) {
            const auto& v = report.violations.front();
            in.stop(Outcome::PlanError, v.rule + " at " + v.path + ": " + v.message);
            break;
        }
        in.run(p.statements, prefix);

        HistoryEntry h;
        h.statement = reply.text;
        while (!h.statement.empty() && (h.statement.back() == '\n' || h.statement.back() == ' ')) h.statement.pop_back();
        if (const auto* a = p.statements[0].as<plan::Assign>()) {
            h.target = a->target;
            store.assigned(a->target);
            auto it = in.bindings().find(a->target);
            if (it != in.bindings().end()) h.value = it->second;
        }
        history.push_back(std::move(h));
    }
    out.transcript = redact(history, opts.relaxation);
    out.record = in.finish();
    out.record.turns = turn;
    return out;
}

}  // namespace cuaplan::fides
