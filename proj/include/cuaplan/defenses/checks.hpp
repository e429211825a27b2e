#pragma once

#include <memory>
#include <optional>
#include <string>

#include "cuaplan/defenses/verdict.hpp"
#include "cuaplan/env/views.hpp"
#include "cuaplan/oracles/consistency.hpp"

namespace cuaplan::defenses {

// Knobs of the verifier heuristics.
struct SuspicionRules {
    bool ad_region = true;       // clicks inside an Advertisement subtree
    bool label_mismatch = true;  // nothing under the point fits the instruction
    // Consent controls closer than this to an advertisement are treated as
    // fake banners. 0 disables the heuristic.
    double fake_banner_distance = 0.08;
    bool thought_consistency = true;

    static SuspicionRules aggressive() { return {}; }
    static SuspicionRules lenient();
    static SuspicionRules from_profile(const std::string& name);  // aggressive | lenient
};

// What a checker gets to see about one environment-reading call.
struct CheckInput {
    std::string tool;
    std::string instruction;  // find-like: the description; verify: the hypothesis
    std::string observation;  // verify only
    std::optional<env::Coord> start;
    std::string thought;
    std::string status;
    const env::DomNode* dom = nullptr;  // null when the frame has no accessibility tree
    const env::VisualView* visual = nullptr;

    bool locates() const { return tool == "find" || tool == "find_element_by_text"; }
};

Verdict dom_consistency_check(const CheckInput& in, const SuspicionRules& rules);
// The screenshot-side checker only.
Verdict visual_consensus_check(const CheckInput& in, const SuspicionRules& rules,
                               const oracles::ConsistencyChecker& consistency);
// DOM check first, then the screenshot checker.
Verdict multimodal_consensus_check(const CheckInput& in, const SuspicionRules& rules,
                                   const oracles::ConsistencyChecker& consistency);

// Verifier model stand-in. Views it receives are rendered for viewer_id().
class CheckerOracle {
public:
    virtual ~CheckerOracle() = default;
    virtual Verdict check(const CheckInput& in) const = 0;
    virtual std::string name() const = 0;
    virtual std::string viewer_id() const { return "checker"; }
};

using CheckerPtr = std::shared_ptr<const CheckerOracle>;

class RuleDomChecker : public CheckerOracle {
public:
    explicit RuleDomChecker(SuspicionRules rules = {}) : rules_(rules) {}
    Verdict check(const CheckInput& in) const override { return dom_consistency_check(in, rules_); }
    std::string name() const override { return "dom-checker"; }

private:
    SuspicionRules rules_;
};

class RuleVisualChecker : public CheckerOracle {
public:
    explicit RuleVisualChecker(SuspicionRules rules = {}, oracles::ConsistencyPtr consistency = nullptr);
    Verdict check(const CheckInput& in) const override;
    std::string name() const override { return "visual-checker"; }

private:
    SuspicionRules rules_;
    oracles::ConsistencyPtr consistency_;
};

}  // namespace cuaplan::defenses
