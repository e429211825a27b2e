#include "cuaplan/plan/printer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cuaplan/util/text.hpp"

namespace cuaplan::plan {

namespace {

// Binding strength, loosest first.
enum Prec { POr = 1, PAnd, PNot, PCmp, PAtom };

int precedence(const Expr& e) {
    if (const auto* b = e.as<BoolOp>()) return b->kind == BoolKind::Or ? POr : PAnd;
    if (e.as<NotOp>()) return PNot;
    if (e.as<Compare>()) return PCmp;
    return PAtom;
}

void print_expr(std::ostringstream& os, const Expr& e);

void print_at(std::ostringstream& os, const Expr& e, int min_prec) {
    if (precedence(e) < min_prec) {
        os << '(';
        print_expr(os, e);
        os << ')';
    } else {
        print_expr(os, e);
    }
}

void print_list(std::ostringstream& os, const std::vector<Expr>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, items[i]);
    }
}

std::string format_float(double v) {
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    std::string s = text::format_number(v);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

struct ExprPrinter {
    std::ostringstream& os;
    void operator()(const NoneLit&) { os << "None"; }
    void operator()(const BoolLit& b) { os << (b.value ? "True" : "False"); }
    void operator()(const IntLit& i) { os << i.value; }
    void operator()(const FloatLit& f) { os << format_float(f.value); }
    void operator()(const StrLit& s) { os << quote_string(s.value); }
    void operator()(const KeyLit& k) { os << "Key." << k.name; }
    void operator()(const ListLit& l) {
        os << '[';
        print_list(os, l.items);
        os << ']';
    }
    void operator()(const TupleLit& t) {
        os << '(';
        print_list(os, t.items);
        if (t.items.size() == 1) os << ',';
        os << ')';
    }
    void operator()(const NameRef& n) { os << n.name; }
    void operator()(const AttrAccess& a) {
        const Expr& base = *a.base;
        bool bare = base.as<NameRef>() || base.as<AttrAccess>() || base.as<CallExpr>() ||
                    base.as<KeyLit>() || base.as<ListLit>() || base.as<TupleLit>() ||
                    base.as<RangeExpr>();
        if (bare) {
            print_expr(os, base);
        } else {
            os << '(';
            print_expr(os, base);
            os << ')';
        }
        os << '.' << a.field;
    }
    void operator()(const CallExpr& c) {
        os << c.callee << '(';
        print_list(os, c.args);
        for (std::size_t i = 0; i < c.kw_names.size(); ++i) {
            if (i || !c.args.empty()) os << ", ";
            os << c.kw_names[i] << '=';
            print_expr(os, c.kw_values[i]);
        }
        os << ')';
    }
    void operator()(const RangeExpr& r) {
        os << "range(";
        print_expr(os, *r.count);
        os << ')';
    }
    void operator()(const Compare& c) {
        print_at(os, *c.lhs, PAtom);
        switch (c.op) {
            case CmpOp::Eq:
                os << " == ";
                print_at(os, *c.rhs, PAtom);
                break;
            case CmpOp::Ne:
                os << " != ";
                print_at(os, *c.rhs, PAtom);
                break;
            case CmpOp::IsNone: os << " is None"; break;
            case CmpOp::IsNotNone: os << " is not None"; break;
        }
    }
    void operator()(const BoolOp& b) {
        int mine = b.kind == BoolKind::Or ? POr : PAnd;
        for (std::size_t i = 0; i < b.operands.size(); ++i) {
            if (i) os << (b.kind == BoolKind::Or ? " or " : " and ");
            print_at(os, b.operands[i], mine + 1);
        }
    }
    void operator()(const NotOp& n) {
        os << "not ";
        print_at(os, *n.operand, PNot);
    }
};

void print_expr(std::ostringstream& os, const Expr& e) { std::visit(ExprPrinter{os}, e.node); }

void print_block(std::ostringstream& os, const std::vector<Stmt>& body, int indent);

void print_stmt(std::ostringstream& os, const Stmt& s, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
    if (const auto* a = s.as<Assign>()) {
        os << pad << a->target << " = ";
        print_expr(os, a->value);
        os << '\n';
    } else if (const auto* e = s.as<ExprStmt>()) {
        os << pad;
        print_expr(os, e->expr);
        os << '\n';
    } else if (const auto* p = s.as<Print>()) {
        os << pad << "print(";
        print_list(os, p->args);
        os << ")\n";
    } else if (const auto* i = s.as<If>()) {
        for (std::size_t b = 0; b < i->branches.size(); ++b) {
            os << pad << (b == 0 ? "if " : "elif ");
            print_expr(os, i->branches[b].guard);
            os << ":\n";
            print_block(os, i->branches[b].body, indent + 1);
        }
        if (!i->else_body.empty()) {
            os << pad << "else:\n";
            print_block(os, i->else_body, indent + 1);
        }
    } else if (const auto* f = s.as<For>()) {
        os << pad << "for ";
        for (std::size_t t = 0; t < f->targets.size(); ++t) {
            if (t) os << ", ";
            os << f->targets[t];
        }
        os << " in ";
        print_expr(os, f->iterable);
        os << ":\n";
        print_block(os, f->body, indent + 1);
    }
}

void print_block(std::ostringstream& os, const std::vector<Stmt>& body, int indent) {
    for (const auto& s : body) print_stmt(os, s, indent);
}

}  // namespace

std::string quote_string(const std::string& s) {
    std::string out = "\"";
    for (unsigned char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c < 0x20 || c == 0x7F) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\x%02x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out += '"';
    return out;
}

std::string pretty_print(const Program& p) {
    std::ostringstream os;
    print_block(os, p.statements, 0);
    return os.str();
}

std::string pretty_print(const Stmt& s, int indent) {
    std::ostringstream os;
    print_stmt(os, s, indent);
    return os.str();
}

std::string pretty_print(const Expr& e) {
    std::ostringstream os;
    print_expr(os, e);
    return os.str();
}

}  // namespace cuaplan::plan
