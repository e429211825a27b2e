#pragma once

#include <memory>

#include "cuaplan/defenses/checks.hpp"
#include "cuaplan/tools/broker.hpp"

namespace cuaplan::defenses {

struct DefenseConfig {
    DefenseLevel level = DefenseLevel::None;
    CheckerPtr checker_dom;     // rule checker when null
    CheckerPtr checker_visual;  // rule checker when null
    SuspicionRules rules;

    static DefenseConfig make(DefenseLevel level, SuspicionRules rules = {});
};

// Runs the configured verifiers after every environment-reading call.
// Each such call yields exactly one Verdict event; ATTACKED withholds the
// result and asks the executor to halt.
class DefendedBroker : public tools::ToolBroker {
public:
    DefendedBroker(tools::ToolBroker& inner, DefenseConfig cfg);
    tools::ToolReply call(const tools::ToolCall& c) override;
    const env::EnvState& env() const override { return inner_.env(); }

    // Verdict for a finished call, without running it.
    Verdict judge(const tools::ToolCall& c, const runtime::Value& result) const;

private:
    tools::ToolBroker& inner_;
    DefenseConfig cfg_;
};

std::unique_ptr<tools::ToolBroker> wrap_broker(tools::ToolBroker& inner, DefenseConfig cfg);

}  // namespace cuaplan::defenses
