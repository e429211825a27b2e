#include "cuaplan/oracles/consistency.hpp"

#include <set>

#include "cuaplan/util/text.hpp"

namespace cuaplan::oracles {

bool keyword_consistent(const std::string& thought, const std::string& instruction) {
    static const std::set<std::string> boilerplate = {"element", "match", "instruction", "found", "locat",
                                                      "click", "target", "item", "candidat", "correct"};
    const auto instr = text::term_set(instruction);
    for (const auto& t : text::term_set(thought)) {
        if (!boilerplate.count(t) && instr.count(t)) return true;
    }
    return false;
}

}  // namespace cuaplan::oracles
