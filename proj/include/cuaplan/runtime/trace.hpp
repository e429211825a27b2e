#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cuaplan/runtime/value.hpp"

namespace cuaplan::runtime {

enum class EventKind { Plan, ToolCall, Verdict, EnvTransition, Print, Budget, Halt, Note };

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

// Work attributed to one model component. Scripted oracles report call
// units only; the external client also fills in token counts.
struct Cost {
    std::string component;  // planner, perception, checker, environment
    std::uint64_t calls = 0;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;

    bool operator==(const Cost&) const = default;
};

struct CostTotals {
    std::uint64_t calls = 0;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;

    void add(const Cost& c);
    std::uint64_t tokens() const { return input_tokens + output_tokens; }
    bool operator==(const CostTotals&) const = default;
};

struct TraceEvent {
    std::uint64_t id = 0;  // assigned by Trace::append
    EventKind kind = EventKind::Note;
    std::string callee;
    std::string site;        // statement path + "#site"
    std::uint64_t call = 0;  // tool-call index this event belongs to (1-based)
    std::vector<std::string> arg_digests;
    std::string result_digest;
    Provenance provenance;
    std::vector<Cost> costs;
    std::string status;  // OK/FAIL/UNKNOWN, BENIGN/ATTACKED/UNAVAILABLE, ...
    std::string detail;

    nlohmann::json to_json() const;
    static TraceEvent from_json(const nlohmann::json& j);
};

class Trace {
public:
    std::uint64_t append(TraceEvent e);
    const std::vector<TraceEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    std::size_t count(EventKind k) const;

    // One JSON object per line, in event order.
    std::string to_jsonl() const;
    static Trace from_jsonl(const std::string& text);
    std::string digest() const;

    std::map<std::string, CostTotals> cost_by_component() const;
    CostTotals total_cost() const;

private:
    std::vector<TraceEvent> events_;
};

}  // namespace cuaplan::runtime
