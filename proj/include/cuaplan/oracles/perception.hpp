#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cuaplan/env/views.hpp"

namespace cuaplan::oracles {

enum class QueryKind { Summarize, Find, FindText, Verify, CheckDone };

std::string to_string(QueryKind k);
QueryKind query_kind_from_string(const std::string& s);

struct PerceptionQuery {
    QueryKind kind = QueryKind::Find;
    std::string text;        // instruction, description, or observation
    std::string hypothesis;  // Verify only
    std::optional<std::vector<std::string>> element_types;  // FindText; nullopt = any role
    std::size_t length = 0;                                  // Summarize
    const env::VisualView* visual = nullptr;  // rendered for this oracle's viewer id
    const env::DomNode* dom = nullptr;        // null on frames without a DOM
    std::uint64_t seed = 0;
    std::uint64_t call_index = 0;
};

struct PerceptionAnswer {
    std::optional<env::Coord> start;
    std::string status = "OK";
    std::string thought;
    std::string text;
    bool done = false;
    // Oracle failure (transport, timeout, bad reply). Tools turn it into a FAIL result.
    std::string error;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
};

// The quarantined perception model.
class PerceptionOracle {
public:
    virtual ~PerceptionOracle() = default;
    virtual PerceptionAnswer answer(const PerceptionQuery& q) const = 0;
    // Identity that adversarial patches can target. Empty sees no patches.
    virtual std::string viewer_id() const { return ""; }
};

using PerceptionPtr = std::shared_ptr<const PerceptionOracle>;

// Raw locate result before tool-level gating.
struct LocateResult {
    std::optional<env::Coord> start;
    std::string label;
    std::string id;
    std::string thought;
};

// Label/synonym match; the visual path scores visual items, the DOM path
// scores accessibility nodes whose role is in `roles` (any role if unset).
LocateResult benign_locate_visual(const std::string& desc, const env::VisualView& visual);
LocateResult benign_locate_dom(const std::string& desc, const env::DomNode& dom,
                               const std::optional<std::vector<std::string>>& roles);

// Role aliases used by plans ("button" -> "push-button", "textbox" -> "entry").
std::string canonical_role(const std::string& role);

// Template summary of a visual frame.
std::string benign_summary(const env::VisualView& visual);

// Keyword-table hypothesis check: OK when most content terms of the
// hypothesis (before any negated clause) occur in the observation.
std::string benign_verify(const std::string& observation, const std::string& hypothesis);

class BenignPerception : public PerceptionOracle {
public:
    explicit BenignPerception(std::string viewer = "uitars") : viewer_(std::move(viewer)) {}
    PerceptionAnswer answer(const PerceptionQuery& q) const override;
    std::string viewer_id() const override { return viewer_; }

private:
    std::string viewer_;
};

// Seeded arbitrary answers: random coordinates (sometimes off-screen),
// random statuses, and text that looks like code. For robustness fuzzing.
class AdversarialPerception : public PerceptionOracle {
public:
    explicit AdversarialPerception(std::uint64_t seed) : seed_(seed) {}
    PerceptionAnswer answer(const PerceptionQuery& q) const override;

private:
    std::uint64_t seed_;
};

}  // namespace cuaplan::oracles
