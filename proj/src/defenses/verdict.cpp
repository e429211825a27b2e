#include "cuaplan/defenses/verdict.hpp"

#include <stdexcept>

#include "cuaplan/util/text.hpp"

namespace cuaplan::defenses {

std::string to_string(Decision d) {
    switch (d) {
        case Decision::Benign: return "BENIGN";
        case Decision::Attacked: return "ATTACKED";
        case Decision::Unavailable: return "UNAVAILABLE";
    }
    return "BENIGN";
}

std::string Verdict::label() const {
    return decision == Decision::Attacked ? "ATTACKED(" + reason + ")" : to_string(decision);
}

std::string to_string(DefenseLevel l) {
    switch (l) {
        case DefenseLevel::None: return "NONE";
        case DefenseLevel::DomConsistency: return "DOM_CONSISTENCY";
        case DefenseLevel::MultiModalConsensus: return "MULTI_MODAL_CONSENSUS";
    }
    return "NONE";
}

DefenseLevel defense_level_from_string(const std::string& s) {
    const std::string l = text::to_lower(s);
    if (l == "none") return DefenseLevel::None;
    if (l == "dom" || l == "dom_consistency") return DefenseLevel::DomConsistency;
    if (l == "consensus" || l == "mmc" || l == "multi_modal_consensus") return DefenseLevel::MultiModalConsensus;
    throw std::invalid_argument("unknown defense level '" + s + "'");
}

}  // namespace cuaplan::defenses
