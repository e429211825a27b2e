#pragma once

#include <memory>
#include <string>

namespace cuaplan::oracles {

// Does a perception model's stated rationale fit the instruction it was given?
class ConsistencyChecker {
public:
    virtual ~ConsistencyChecker() = default;
    virtual bool consistent(const std::string& thought, const std::string& instruction) const = 0;
};

// Keyword rule: at least one content term of the thought, other than
// boilerplate like "element" or "matches", also occurs in the instruction.
bool keyword_consistent(const std::string& thought, const std::string& instruction);

class KeywordConsistency : public ConsistencyChecker {
public:
    bool consistent(const std::string& thought, const std::string& instruction) const override {
        return keyword_consistent(thought, instruction);
    }
};

using ConsistencyPtr = std::shared_ptr<const ConsistencyChecker>;

}  // namespace cuaplan::oracles
