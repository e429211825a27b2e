#pragma once

#include <cstdint>
#include <string_view>

#include "cuaplan/plan/ast.hpp"
#include "cuaplan/plan/errors.hpp"

namespace cuaplan::plan {

// Throws SyntaxError or ForbiddenConstruct.
Program parse_plan(std::string_view source);

// Process-wide count of parse_plan invocations. Lets tests assert that
// executing a plan never routes runtime data back through the parser.
std::uint64_t parse_invocations();

}  // namespace cuaplan::plan
