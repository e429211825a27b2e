#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cuaplan::plan {

// Owning pointer with value semantics, so AST nodes copy deeply and
// compare structurally.
template <class T>
class Box {
public:
    Box() : p_(std::make_unique<T>()) {}
    Box(T value) : p_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& o) {
        if (this != &o) p_ = std::make_unique<T>(*o.p_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    T& operator*() { return *p_; }
    const T& operator*() const { return *p_; }
    T* operator->() { return p_.get(); }
    const T* operator->() const { return p_.get(); }

    bool operator==(const Box& o) const { return *p_ == *o.p_; }

private:
    std::unique_ptr<T> p_;
};

struct Expr;

struct NoneLit {
    bool operator==(const NoneLit&) const = default;
};
struct BoolLit {
    bool value = false;
    bool operator==(const BoolLit&) const = default;
};
struct IntLit {
    long long value = 0;
    bool operator==(const IntLit&) const = default;
};
struct FloatLit {
    double value = 0.0;
    bool operator==(const FloatLit&) const = default;
};
struct StrLit {
    std::string value;
    bool operator==(const StrLit&) const = default;
};
// Key.CTRL, Key.ENTER ...
struct KeyLit {
    std::string name;
    bool operator==(const KeyLit&) const = default;
};
struct ListLit {
    std::vector<Expr> items;
    bool operator==(const ListLit&) const;
};
struct TupleLit {
    std::vector<Expr> items;
    bool operator==(const TupleLit&) const;
};
struct NameRef {
    std::string name;
    bool operator==(const NameRef&) const = default;
};
struct AttrAccess {
    Box<Expr> base;
    std::string field;
    bool operator==(const AttrAccess&) const;
};
// `site` is the pre-order index of this call among the calls of its
// enclosing statement.
struct CallExpr {
    std::string callee;
    std::vector<Expr> args;
    std::vector<std::string> kw_names;
    std::vector<Expr> kw_values;
    int site = 0;
    bool operator==(const CallExpr&) const;
    std::size_t arity() const { return args.size() + kw_values.size(); }
};
// range(<int literal>); only legal as a loop iterable, never a call site.
struct RangeExpr {
    Box<Expr> count;
    bool operator==(const RangeExpr&) const;
};

enum class CmpOp { Eq, Ne, IsNone, IsNotNone };

struct Compare {
    Box<Expr> lhs;
    CmpOp op = CmpOp::Eq;
    Box<Expr> rhs;  // NoneLit for the is-none forms
    bool operator==(const Compare&) const;
};

enum class BoolKind { And, Or };

struct BoolOp {
    BoolKind kind = BoolKind::And;
    std::vector<Expr> operands;
    bool operator==(const BoolOp&) const;
};
struct NotOp {
    Box<Expr> operand;
    bool operator==(const NotOp&) const;
};

struct Expr {
    using Node = std::variant<NoneLit, BoolLit, IntLit, FloatLit, StrLit, KeyLit, ListLit,
                              TupleLit, NameRef, AttrAccess, CallExpr, RangeExpr, Compare,
                              BoolOp, NotOp>;
    Node node;
    int line = 0;

    Expr() = default;
    template <class T>
    Expr(T n, int ln = 0) : node(std::move(n)), line(ln) {}

    // Source positions do not take part in structural equality.
    bool operator==(const Expr& o) const { return node == o.node; }

    template <class T>
    const T* as() const { return std::get_if<T>(&node); }
};

struct Stmt;

struct Assign {
    std::string target;
    Expr value;
    bool operator==(const Assign&) const = default;
};
struct ExprStmt {
    Expr expr;
    bool operator==(const ExprStmt&) const = default;
};
struct Print {
    std::vector<Expr> args;
    bool operator==(const Print&) const = default;
};
struct IfBranch {
    Expr guard;
    std::vector<Stmt> body;
    bool operator==(const IfBranch&) const;
};
struct If {
    std::vector<IfBranch> branches;
    std::vector<Stmt> else_body;
    bool operator==(const If&) const;
};
struct For {
    std::vector<std::string> targets;
    Expr iterable;
    std::vector<Stmt> body;
    bool operator==(const For&) const;
};

struct Stmt {
    using Node = std::variant<Assign, ExprStmt, Print, If, For>;
    Node node;
    int line = 0;

    Stmt() = default;
    template <class T>
    Stmt(T n, int ln = 0) : node(std::move(n)), line(ln) {}

    bool operator==(const Stmt& o) const { return node == o.node; }

    template <class T>
    const T* as() const { return std::get_if<T>(&node); }
};

struct Program {
    std::vector<Stmt> statements;
    std::string source_digest;

    // Structural: the digest and line numbers are ignored.
    bool operator==(const Program& o) const { return statements == o.statements; }
};

}  // namespace cuaplan::plan
