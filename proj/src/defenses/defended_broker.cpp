#include "cuaplan/defenses/defended_broker.hpp"

#include "cuaplan/env/views.hpp"
#include "cuaplan/tools/toolset.hpp"

namespace cuaplan::defenses {

using runtime::Value;

namespace {

std::string field_text(const Value& result, const char* field) {
    if (const auto* r = result.as_record()) {
        if (const Value* v = r->get(field)) return tools::instruction_text(*v);
    }
    return "";
}

std::optional<env::Coord> field_coord(const Value& result) {
    if (const auto* r = result.as_record()) {
        if (const Value* v = r->get("start")) {
            if (const auto* c = v->as_coord()) return *c;
        }
    }
    return std::nullopt;
}

std::string arg_text(const tools::ToolCall& c, const char* name) {
    const Value* v = c.arg(name);
    return v ? tools::instruction_text(*v) : "";
}

}  // namespace

DefenseConfig DefenseConfig::make(DefenseLevel level, SuspicionRules rules) {
    DefenseConfig cfg;
    cfg.level = level;
    cfg.rules = rules;
    cfg.checker_dom = std::make_shared<RuleDomChecker>(rules);
    cfg.checker_visual = std::make_shared<RuleVisualChecker>(rules);
    return cfg;
}

DefendedBroker::DefendedBroker(tools::ToolBroker& inner, DefenseConfig cfg) : inner_(inner), cfg_(std::move(cfg)) {
    if (!cfg_.checker_dom) cfg_.checker_dom = std::make_shared<RuleDomChecker>(cfg_.rules);
    if (!cfg_.checker_visual) cfg_.checker_visual = std::make_shared<RuleVisualChecker>(cfg_.rules);
}

Verdict DefendedBroker::judge(const tools::ToolCall& c, const Value& result) const {
    const std::string& name = c.spec->name;
    CheckInput in;
    in.tool = name;
    if (name == "find") in.instruction = arg_text(c, "instruction");
    else if (name == "find_element_by_text") in.instruction = arg_text(c, "description");
    else if (name == "verify_hypothesis") {
        in.instruction = arg_text(c, "hypothesis");
        in.observation = arg_text(c, "observation");
    } else if (name == "summarize_screenshot_content" || name == "check_done") {
        in.instruction = arg_text(c, "instruction");
    }
    in.start = field_coord(result);
    in.thought = field_text(result, "thought");
    in.status = field_text(result, "status");

    const auto& env = inner_.env();
    auto dom = env::dom_tree(env);
    in.dom = dom ? &*dom : nullptr;

    auto ask = [&](const CheckerOracle& checker) {
        env::VisualView visual = env::render_visual(env, checker.viewer_id());
        CheckInput local = in;
        local.visual = &visual;
        Verdict v = checker.check(local);
        v.costs.push_back({"checker", 1, 0, 0});
        return v;
    };

    Verdict dom_verdict = ask(*cfg_.checker_dom);
    if (cfg_.level == DefenseLevel::DomConsistency || dom_verdict.attacked()) return dom_verdict;

    Verdict visual = ask(*cfg_.checker_visual);
    visual.costs.insert(visual.costs.begin(), dom_verdict.costs.begin(), dom_verdict.costs.end());
    if (visual.decision == Decision::Benign && dom_verdict.decision == Decision::Unavailable) {
        visual.reason = visual.reason.empty() ? "DOM unavailable" : visual.reason + "; DOM unavailable";
    }
    return visual;
}

tools::ToolReply DefendedBroker::call(const tools::ToolCall& c) {
    tools::ToolReply reply = inner_.call(c);
    if (cfg_.level == DefenseLevel::None || !c.spec->reads_env) return reply;

    Verdict v = judge(c, reply.result);
    runtime::TraceEvent ev;
    ev.kind = runtime::EventKind::Verdict;
    ev.callee = to_string(cfg_.level);
    ev.status = to_string(v.decision);
    ev.detail = v.reason;
    ev.costs = v.costs;
    reply.before.push_back(std::move(ev));
    if (v.attacked()) {
        // The flagged output never reaches a variable.
        reply.result = Value::none();
        reply.halted = true;
        reply.halt_reason = v.label();
    }
    return reply;
}

std::unique_ptr<tools::ToolBroker> wrap_broker(tools::ToolBroker& inner, DefenseConfig cfg) {
    return std::make_unique<DefendedBroker>(inner, std::move(cfg));
}

}  // namespace cuaplan::defenses
