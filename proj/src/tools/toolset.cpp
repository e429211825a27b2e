#include "cuaplan/tools/toolset.hpp"

#include <stdexcept>

#include "cuaplan/env/views.hpp"
#include "cuaplan/util/text.hpp"

namespace cuaplan::tools {

using runtime::Record;
using runtime::Value;

const Value* ToolCall::arg(const std::string& name) const {
    auto it = args.find(name);
    return it == args.end() ? nullptr : &it->second;
}

std::string normalize_status(const std::string& s) {
    if (s == "OK" || s == "FAIL" || s == "UNKNOWN") return s;
    return "UNKNOWN";
}

std::string instruction_text(const Value& v) {
    if (const auto* r = v.as_record()) {
        if (const Value* t = r->get("text")) return instruction_text(*t);
    }
    if (const auto* s = v.as_text()) return *s;
    if (v.is_none()) return "";
    return v.render();
}

namespace {

Value record(std::initializer_list<std::pair<const char*, Value>> fields) {
    Record r;
    for (const auto& [k, v] : fields) r.set(k, v);
    return Value::record(std::move(r));
}

std::optional<double> number_arg(const ToolCall& c, const std::string& name) {
    const Value* v = c.arg(name);
    if (!v) return std::nullopt;
    if (const double* d = v->as_number()) return *d;
    if (const auto* r = v->as_record()) {
        if (const Value* l = r->get("length")) {
            if (const double* d = l->as_number()) return *d;
        }
    }
    return std::nullopt;
}

std::size_t clamp_length(double d) { return d <= 0 ? 0 : static_cast<std::size_t>(d); }

std::optional<std::vector<std::string>> role_list(const Value* v) {
    if (!v || v->is_none()) return std::nullopt;
    std::vector<std::string> out;
    if (const auto* l = v->as_list()) {
        for (const auto& item : *l) out.push_back(instruction_text(item));
    } else {
        out.push_back(instruction_text(*v));
    }
    return out;
}

runtime::Cost perception_cost(const oracles::PerceptionAnswer& a) {
    return {"perception", 1, a.input_tokens, a.output_tokens};
}

}  // namespace

Value find_result(const std::optional<env::Coord>& start, const std::string& status, const std::string& thought) {
    return record({{"start", start ? Value::coord(*start) : Value::none()},
                   {"status", Value::text(status)},
                   {"thought", Value::text(thought)}});
}

Value status_result(const std::string& status) { return record({{"status", Value::text(status)}}); }

Value text_result(const std::string& text, const std::string& status) {
    return record({{"text", Value::text(text)}, {"status", Value::text(status)}});
}

Value action_result(const std::string& status, bool screen_changed) {
    return record({{"status", Value::text(status)}, {"screen_changed", Value::boolean(screen_changed)}});
}

Value done_result(bool done) { return record({{"done", Value::boolean(done)}}); }

EnvBroker::EnvBroker(env::EnvState env, oracles::PerceptionPtr perception, oracles::ConsistencyPtr consistency,
                     ToolsetConfig cfg)
    : env_(std::move(env)),
      perception_(std::move(perception)),
      consistency_(consistency ? std::move(consistency) : std::make_shared<oracles::KeywordConsistency>()),
      cfg_(cfg) {
    if (!perception_) throw std::invalid_argument("EnvBroker needs a perception oracle");
}

oracles::PerceptionAnswer EnvBroker::ask(oracles::PerceptionQuery q, ToolReply& reply) {
    env::VisualView visual = env::render_visual(env_, perception_->viewer_id());
    auto dom = env::dom_tree(env_);
    q.visual = &visual;
    q.dom = dom ? &*dom : nullptr;
    q.seed = cfg_.seed;
    oracles::PerceptionAnswer a;
    try {
        a = perception_->answer(q);
    } catch (const std::exception& e) {
        a = {};
        a.error = e.what();
    }
    reply.costs.push_back(perception_cost(a));
    return a;
}

ToolReply EnvBroker::call(const ToolCall& c) {
    if (!c.spec) throw std::invalid_argument("tool call without a tool spec");
    const std::string& name = c.spec->name;
    if (name == "summarize_screenshot_content") return summarize(c);
    if (name == "find") return find(c, false);
    if (name == "find_element_by_text") return find(c, true);
    if (name == "verify_hypothesis") return verify(c);
    if (name == "get_page_elements") return page_elements(c);
    if (name == "get_page_text") return page_text(c);
    if (name == "check_done") return check_done(c);
    if (name == "mark_done") return terminal(c, env::Terminal::Done);
    if (name == "mark_fail") return terminal(c, env::Terminal::Fail);
    if (name == "wait" || name == "no_op") {
        ToolReply r;
        r.result = action_result("OK", false);
        r.status = "OK";
        return r;
    }
    if (c.spec->kind == ToolKind::Action) return action(c);
    throw std::invalid_argument("tool '" + name + "' has no implementation");
}

ToolReply EnvBroker::summarize(const ToolCall& c) {
    ToolReply r;
    oracles::PerceptionQuery q;
    q.kind = oracles::QueryKind::Summarize;
    q.call_index = c.index;
    const Value* instr = c.arg("instruction");
    q.text = instr ? instruction_text(*instr) : "";
    // An explicit outer length overrides the one inside the Instruction.
    std::size_t length = cfg_.default_summary_length;
    if (const Value* outer = c.arg("length"); outer && outer->as_number()) {
        length = clamp_length(*outer->as_number());
    } else if (instr) {
        if (auto inner = number_arg(c, "instruction")) length = clamp_length(*inner);
    }
    q.length = length;
    auto a = ask(q, r);
    if (!a.error.empty()) {
        r.result = text_result("", "FAIL");
        r.status = "FAIL";
        return r;
    }
    r.result = text_result(text::truncate_chars(a.text, length));
    r.status = "OK";
    return r;
}

ToolReply EnvBroker::find(const ToolCall& c, bool dom_path) {
    ToolReply r;
    oracles::PerceptionQuery q;
    q.kind = dom_path ? oracles::QueryKind::FindText : oracles::QueryKind::Find;
    q.call_index = c.index;
    const Value* instr = c.arg(dom_path ? "description" : "instruction");
    q.text = instr ? instruction_text(*instr) : "";
    if (dom_path) q.element_types = role_list(c.arg("element_types"));
    auto a = ask(q, r);
    if (!a.error.empty()) {
        r.result = find_result(std::nullopt, "FAIL", "oracle failure: " + a.error);
        r.status = "FAIL";
        return r;
    }
    // Coordinates are only released when the rationale fits the request.
    if (a.start && !consistency_->consistent(a.thought, q.text)) {
        r.result = find_result(std::nullopt, "FAIL", a.thought);
        r.status = "FAIL";
        return r;
    }
    std::string status = a.start ? normalize_status(a.status) : "OK";
    r.result = find_result(a.start, status, a.thought);
    r.status = status;
    return r;
}

ToolReply EnvBroker::verify(const ToolCall& c) {
    ToolReply r;
    oracles::PerceptionQuery q;
    q.kind = oracles::QueryKind::Verify;
    q.call_index = c.index;
    if (const Value* o = c.arg("observation")) q.text = instruction_text(*o);
    if (const Value* h = c.arg("hypothesis")) q.hypothesis = instruction_text(*h);
    auto a = ask(q, r);
    std::string status = a.error.empty() ? normalize_status(a.status) : "FAIL";
    r.result = status_result(status);
    r.status = status;
    return r;
}

ToolReply EnvBroker::page_elements(const ToolCall& c) {
    ToolReply r;
    auto dom = env::dom_tree(env_);
    if (!dom) {
        r.result = text_result("", "FAIL");
        r.status = "FAIL";
        r.after.push_back({0, runtime::EventKind::Note, c.spec->name, c.site, c.index, {}, "", {}, {}, "FAIL",
                           env::NoPage(env_.current_frame).what()});
        return r;
    }
    auto roles = role_list(c.arg("element_types"));
    std::string out;
    if (!roles) {
        out = env::render_dom(*dom);
    } else {
        std::set<std::string> allowed;
        for (const auto& role : *roles) allowed.insert(oracles::canonical_role(role));
        env::for_each_node(*dom, [&](const env::DomNode& n, const auto& ancestors) {
            if (ancestors.empty() || !allowed.count(oracles::canonical_role(n.role))) return;
            env::DomNode leaf = n;
            leaf.children.clear();
            out += env::render_dom(leaf);
        });
    }
    r.result = text_result(text::truncate_chars(out, cfg_.page_text_cap));
    r.status = "OK";
    return r;
}

ToolReply EnvBroker::page_text(const ToolCall& c) {
    ToolReply r;
    std::size_t max_length = cfg_.default_page_length;
    if (auto n = number_arg(c, "max_length")) max_length = clamp_length(*n);
    bool nav = false;
    if (const Value* v = c.arg("include_navigation"); v && v->as_bool()) nav = *v->as_bool();
    try {
        r.result = text_result(text::truncate_chars(env::page_text(env_, nav), max_length));
        r.status = "OK";
    } catch (const env::NoPage& e) {
        r.result = text_result("", "FAIL");
        r.status = "FAIL";
        r.after.push_back({0, runtime::EventKind::Note, c.spec->name, c.site, c.index, {}, "", {}, {}, "FAIL", e.what()});
    }
    return r;
}

ToolReply EnvBroker::check_done(const ToolCall& c) {
    ToolReply r;
    bool done = false;
    if (cfg_.oracle_check_done) {
        oracles::PerceptionQuery q;
        q.kind = oracles::QueryKind::CheckDone;
        q.call_index = c.index;
        if (const Value* i = c.arg("instruction")) q.text = instruction_text(*i);
        auto a = ask(q, r);
        done = a.error.empty() && a.done;
    } else {
        done = env::evaluate_goal(env_);
    }
    r.result = done_result(done);
    r.status = done ? "OK" : "FAIL";
    return r;
}

ToolReply EnvBroker::terminal(const ToolCall&, env::Terminal t) {
    ToolReply r;
    env_.terminal = t;
    r.terminal = t;
    r.result = action_result("OK", false);
    r.status = "OK";
    return r;
}

ToolReply EnvBroker::action(const ToolCall& c) {
    ToolReply r;
    const std::string& name = c.spec->name;
    env::Action a;
    std::string problem;
    auto coord_of = [&](const Value* v) -> std::optional<env::Coord> {
        if (v && v->as_coord()) return *v->as_coord();
        return std::nullopt;
    };
    if (name == "left_single") {
        a.kind = env::ActionKind::Click;
        a.at = coord_of(c.arg("start"));
        if (!a.at) problem = "no coordinates to click";
    } else if (name == "type_text") {
        a.kind = env::ActionKind::Type;
        const Value* t = c.arg("text");
        if (t && t->as_text()) {
            a.text = *t->as_text();
        } else {
            problem = "type_text needs text";
        }
    } else if (name == "press") {
        a.kind = env::ActionKind::Press;
        a.key = c.arg("key") ? instruction_text(*c.arg("key")) : "";
        if (a.key.empty()) problem = "press needs a key";
    } else if (name == "hotkey") {
        a.kind = env::ActionKind::Hotkey;
        const Value* keys = c.arg("keys");
        if (keys && keys->as_list()) {
            for (const auto& k : *keys->as_list()) a.key += (a.key.empty() ? "" : "+") + instruction_text(k);
        } else if (keys) {
            a.key = instruction_text(*keys);
        }
        if (a.key.empty()) problem = "hotkey needs keys";
    } else if (name == "scroll") {
        a.kind = env::ActionKind::Scroll;
        a.direction = c.arg("direction") ? instruction_text(*c.arg("direction")) : "";
        a.at = coord_of(c.arg("start"));
    } else {
        throw std::invalid_argument("unknown action tool '" + name + "'");
    }

    const std::string from = env_.current_frame;
    runtime::TraceEvent ev;
    ev.kind = runtime::EventKind::EnvTransition;
    ev.callee = name;
    ev.site = c.site;
    ev.call = c.index;
    if (!problem.empty()) {
        r.result = action_result("FAIL", false);
        r.status = "FAIL";
        ev.status = "FAIL";
        ev.detail = problem;
    } else {
        try {
            env::ActionOutcome out = env::apply_action(env_, a);
            r.status = env::to_string(out.status);
            r.result = action_result(r.status, out.screen_changed);
            ev.status = r.status;
            ev.detail = from + " -> " + env_.current_frame;
            if (!out.target.empty()) ev.detail += " [" + out.target + "]";
            if (!out.note.empty()) ev.detail += " " + out.note;
        } catch (const env::OutOfBounds& e) {
            r.result = action_result("FAIL", false);
            r.status = "FAIL";
            ev.status = "FAIL";
            ev.detail = e.what();
        }
    }
    ev.result_digest = env::snapshot_digest(env_).substr(0, 16);
    r.after.push_back(std::move(ev));
    return r;
}

}  // namespace cuaplan::tools
