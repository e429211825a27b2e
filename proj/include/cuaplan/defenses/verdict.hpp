#pragma once

#include <string>

#include "cuaplan/runtime/trace.hpp"

namespace cuaplan::defenses {

enum class Decision { Benign, Attacked, Unavailable };

std::string to_string(Decision d);  // BENIGN, ATTACKED, UNAVAILABLE

struct Verdict {
    Decision decision = Decision::Benign;
    std::string reason;
    std::vector<runtime::Cost> costs;

    static Verdict benign(std::string reason = "") { return {Decision::Benign, std::move(reason), {}}; }
    static Verdict attacked(std::string reason) { return {Decision::Attacked, std::move(reason), {}}; }
    static Verdict unavailable(std::string reason) { return {Decision::Unavailable, std::move(reason), {}}; }

    bool attacked() const { return decision == Decision::Attacked; }
    // "ATTACKED(advertisement frame)"
    std::string label() const;
};

enum class DefenseLevel { None, DomConsistency, MultiModalConsensus };

std::string to_string(DefenseLevel l);  // NONE, DOM_CONSISTENCY, MULTI_MODAL_CONSENSUS
// Accepts the enum names and the CLI spellings none / dom / consensus.
DefenseLevel defense_level_from_string(const std::string& s);

}  // namespace cuaplan::defenses
