#pragma once

#include <string>

#include "cuaplan/plan/ast.hpp"

namespace cuaplan::plan {

// Canonical source form; parse_plan(pretty_print(p)) == p.
std::string pretty_print(const Program& p);
std::string pretty_print(const Stmt& s, int indent = 0);
std::string pretty_print(const Expr& e);

std::string quote_string(const std::string& s);

}  // namespace cuaplan::plan
