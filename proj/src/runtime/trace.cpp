#include "cuaplan/runtime/trace.hpp"

#include <sstream>
#include <stdexcept>

#include "cuaplan/util/digest.hpp"

namespace cuaplan::runtime {

using nlohmann::json;

namespace {

const std::vector<std::pair<EventKind, std::string>>& kind_names() {
    static const std::vector<std::pair<EventKind, std::string>> names = {
        {EventKind::Plan, "plan"},     {EventKind::ToolCall, "tool-call"},
        {EventKind::Verdict, "verdict"}, {EventKind::EnvTransition, "env-transition"},
        {EventKind::Print, "print"},   {EventKind::Budget, "budget"},
        {EventKind::Halt, "halt"},     {EventKind::Note, "note"},
    };
    return names;
}

}  // namespace

std::string to_string(EventKind k) {
    for (const auto& [kind, name] : kind_names()) {
        if (kind == k) return name;
    }
    return "note";
}

EventKind event_kind_from_string(const std::string& s) {
    for (const auto& [kind, name] : kind_names()) {
        if (name == s) return kind;
    }
    throw std::invalid_argument("unknown trace event kind '" + s + "'");
}

void CostTotals::add(const Cost& c) {
    calls += c.calls;
    input_tokens += c.input_tokens;
    output_tokens += c.output_tokens;
}

json TraceEvent::to_json() const {
    json costs_json = json::array();
    for (const auto& c : costs) {
        costs_json.push_back({{"component", c.component},
                              {"calls", c.calls},
                              {"input_tokens", c.input_tokens},
                              {"output_tokens", c.output_tokens}});
    }
    return {{"id", id},
            {"kind", runtime::to_string(kind)},
            {"callee", callee},
            {"site", site},
            {"call", call},
            {"args", arg_digests},
            {"result", result_digest},
            {"provenance", std::vector<std::uint64_t>(provenance.begin(), provenance.end())},
            {"costs", costs_json},
            {"status", status},
            {"detail", detail}};
}

TraceEvent TraceEvent::from_json(const json& j) {
    TraceEvent e;
    e.id = j.at("id").get<std::uint64_t>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.callee = j.value("callee", "");
    e.site = j.value("site", "");
    e.call = j.value("call", std::uint64_t{0});
    e.arg_digests = j.value("args", std::vector<std::string>{});
    e.result_digest = j.value("result", "");
    for (auto id : j.value("provenance", std::vector<std::uint64_t>{})) e.provenance.insert(id);
    for (const auto& c : j.value("costs", json::array())) {
        e.costs.push_back({c.at("component").get<std::string>(), c.value("calls", std::uint64_t{0}),
                           c.value("input_tokens", std::uint64_t{0}), c.value("output_tokens", std::uint64_t{0})});
    }
    e.status = j.value("status", "");
    e.detail = j.value("detail", "");
    return e;
}

std::uint64_t Trace::append(TraceEvent e) {
    e.id = events_.size() + 1;
    events_.push_back(std::move(e));
    return events_.back().id;
}

std::size_t Trace::count(EventKind k) const {
    std::size_t n = 0;
    for (const auto& e : events_) n += e.kind == k;
    return n;
}

std::string Trace::to_jsonl() const {
    std::string out;
    for (const auto& e : events_) {
        out += e.to_json().dump();
        out += '\n';
    }
    return out;
}

Trace Trace::from_jsonl(const std::string& text) {
    Trace t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TraceEvent e = TraceEvent::from_json(json::parse(line));
        if (e.id != t.events_.size() + 1) throw std::invalid_argument("trace event ids must be consecutive");
        t.events_.push_back(std::move(e));
    }
    return t;
}

std::string Trace::digest() const { return sha256_hex(to_jsonl()); }

std::map<std::string, CostTotals> Trace::cost_by_component() const {
    std::map<std::string, CostTotals> out;
    for (const auto& e : events_) {
        for (const auto& c : e.costs) out[c.component].add(c);
    }
    return out;
}

CostTotals Trace::total_cost() const {
    CostTotals t;
    for (const auto& e : events_) {
        for (const auto& c : e.costs) t.add(c);
    }
    return t;
}

}  // namespace cuaplan::runtime
