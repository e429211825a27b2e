#include "cuaplan/plan/ast.hpp"

#include "cuaplan/plan/errors.hpp"

namespace cuaplan::plan {

bool ListLit::operator==(const ListLit& o) const { return items == o.items; }
bool TupleLit::operator==(const TupleLit& o) const { return items == o.items; }
bool AttrAccess::operator==(const AttrAccess& o) const {
    return field == o.field && base == o.base;
}
bool CallExpr::operator==(const CallExpr& o) const {
    return callee == o.callee && site == o.site && args == o.args &&
           kw_names == o.kw_names && kw_values == o.kw_values;
}
bool RangeExpr::operator==(const RangeExpr& o) const { return count == o.count; }
bool Compare::operator==(const Compare& o) const {
    return op == o.op && lhs == o.lhs && rhs == o.rhs;
}
bool BoolOp::operator==(const BoolOp& o) const {
    return kind == o.kind && operands == o.operands;
}
bool NotOp::operator==(const NotOp& o) const { return operand == o.operand; }
bool IfBranch::operator==(const IfBranch& o) const {
    return guard == o.guard && body == o.body;
}
bool If::operator==(const If& o) const {
    return branches == o.branches && else_body == o.else_body;
}
bool For::operator==(const For& o) const {
    return targets == o.targets && iterable == o.iterable && body == o.body;
}

std::string SourceLoc::str() const {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

SyntaxError::SyntaxError(SourceLoc loc, const std::string& message)
    : std::runtime_error("syntax error at " + loc.str() + ": " + message),
      loc_(loc),
      detail_(message) {}

ForbiddenConstruct::ForbiddenConstruct(std::string kind, SourceLoc loc)
    : std::runtime_error("forbidden construct '" + kind + "' at " + loc.str()),
      kind_(std::move(kind)),
      loc_(loc) {}

}  // namespace cuaplan::plan
