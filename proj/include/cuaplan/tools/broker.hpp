#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cuaplan/env/env.hpp"
#include "cuaplan/runtime/trace.hpp"
#include "cuaplan/runtime/value.hpp"
#include "cuaplan/tools/manifest.hpp"

namespace cuaplan::tools {

struct ToolCall {
    const ToolSpec* spec = nullptr;
    std::map<std::string, runtime::Value> args;  // by parameter name; omitted params are absent
    std::string site;
    std::uint64_t index = 0;  // 1-based tool-call counter of the run

    const runtime::Value* arg(const std::string& name) const;
};

struct ToolReply {
    runtime::Value result;  // payload only; the caller stamps provenance
    std::string status;     // summary status for the trace
    std::vector<runtime::TraceEvent> before;  // verdicts, recorded ahead of the call event
    std::vector<runtime::TraceEvent> after;   // environment transitions
    std::vector<runtime::Cost> costs;
    bool halted = false;  // a verifier flagged the call
    std::string halt_reason;
    env::Terminal terminal = env::Terminal::None;  // mark_done / mark_fail
};

// The only door from a plan to the environment.
class ToolBroker {
public:
    virtual ~ToolBroker() = default;
    virtual ToolReply call(const ToolCall& c) = 0;
    virtual const env::EnvState& env() const = 0;
};

}  // namespace cuaplan::tools
