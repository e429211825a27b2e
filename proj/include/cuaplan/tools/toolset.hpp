#pragma once

#include <cstdint>
#include <string>

#include "cuaplan/oracles/consistency.hpp"
#include "cuaplan/oracles/perception.hpp"
#include "cuaplan/tools/broker.hpp"

namespace cuaplan::tools {

struct ToolsetConfig {
    bool oracle_check_done = false;    // ask the perception oracle instead of the goal evaluator
    std::size_t page_text_cap = 4000;  // get_page_elements output ceiling
    std::size_t default_summary_length = 300;
    std::size_t default_page_length = 2000;
    std::uint64_t seed = 0;
};

// Tool implementations against one EnvState and a perception oracle.
class EnvBroker : public ToolBroker {
public:
    EnvBroker(env::EnvState env, oracles::PerceptionPtr perception,
              oracles::ConsistencyPtr consistency = nullptr, ToolsetConfig cfg = {});

    ToolReply call(const ToolCall& c) override;
    const env::EnvState& env() const override { return env_; }
    env::EnvState& mutable_env() { return env_; }

private:
    ToolReply summarize(const ToolCall& c);
    ToolReply find(const ToolCall& c, bool dom_path);
    ToolReply verify(const ToolCall& c);
    ToolReply page_elements(const ToolCall& c);
    ToolReply page_text(const ToolCall& c);
    ToolReply check_done(const ToolCall& c);
    ToolReply action(const ToolCall& c);
    ToolReply terminal(const ToolCall& c, env::Terminal t);

    oracles::PerceptionAnswer ask(oracles::PerceptionQuery q, ToolReply& reply);

    env::EnvState env_;
    oracles::PerceptionPtr perception_;
    oracles::ConsistencyPtr consistency_;
    ToolsetConfig cfg_;
};

// Text carried by an instruction-like argument: the text field of an
// Instruction record, a plain string, or the rendering of anything else.
std::string instruction_text(const runtime::Value& v);

// Result record builders shared by brokers and tests.
runtime::Value find_result(const std::optional<env::Coord>& start, const std::string& status,
                           const std::string& thought);
runtime::Value status_result(const std::string& status);
runtime::Value text_result(const std::string& text, const std::string& status = "OK");
runtime::Value action_result(const std::string& status, bool screen_changed);
runtime::Value done_result(bool done);

std::string normalize_status(const std::string& s);  // OK / FAIL / UNKNOWN

}  // namespace cuaplan::tools
