#pragma once

#include <stdexcept>
#include <string>

namespace cuaplan::plan {

struct SourceLoc {
    int line = 0;
    int column = 0;
    std::string str() const;
};

// Malformed plan text.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(SourceLoc loc, const std::string& message);
    const SourceLoc& where() const { return loc_; }
    const std::string& detail() const { return detail_; }

private:
    SourceLoc loc_;
    std::string detail_;
};

// Well-formed Python that falls outside the plan language
// (while, def, import, lambda, subscripts, ...).
class ForbiddenConstruct : public std::runtime_error {
public:
    ForbiddenConstruct(std::string kind, SourceLoc loc);
    const std::string& kind() const { return kind_; }
    const SourceLoc& where() const { return loc_; }

private:
    std::string kind_;
    SourceLoc loc_;
};

}  // namespace cuaplan::plan
