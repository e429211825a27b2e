#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "cuaplan/oracles/perception.hpp"

namespace cuaplan::oracles {

struct ScriptRule {
    std::optional<QueryKind> kind;  // any kind when unset
    std::string text_contains;      // case-insensitive; empty matches all
    std::string frame;              // empty matches all
    PerceptionAnswer response;
    std::string target;  // visual item whose center becomes `start`, if set

    bool matches(const PerceptionQuery& q) const;
};

// Ordered rules; first match wins, then the fallback.
struct OracleScript {
    std::vector<ScriptRule> rules;
    std::optional<PerceptionAnswer> fallback;

    static OracleScript from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Answers from a script, delegating unmatched queries to `inner` when
// there is no fallback. With neither, the answer is an empty UNKNOWN.
class ScriptedPerception : public PerceptionOracle {
public:
    explicit ScriptedPerception(OracleScript script, PerceptionPtr inner = nullptr);
    PerceptionAnswer answer(const PerceptionQuery& q) const override;
    std::string viewer_id() const override { return inner_ ? inner_->viewer_id() : ""; }

private:
    OracleScript script_;
    PerceptionPtr inner_;
};

PerceptionAnswer answer_from_json(const nlohmann::json& j);
nlohmann::json answer_to_json(const PerceptionAnswer& a);

}  // namespace cuaplan::oracles
