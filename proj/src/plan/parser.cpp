#include "cuaplan/plan/parser.hpp"

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <set>

#include "cuaplan/plan/lexer.hpp"
#include "cuaplan/util/digest.hpp"

namespace cuaplan::plan {

namespace {

std::atomic<std::uint64_t> g_parse_count{0};

const std::set<std::string>& forbidden_keywords() {
    static const std::set<std::string> kw = {
        "while", "def",   "import", "from",   "lambda", "class",    "try",
        "except", "finally", "with", "return", "break", "continue", "global",
        "nonlocal", "yield", "del", "assert", "raise", "async", "await", "pass",
    };
    return kw;
}

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> kw = {"if", "elif", "else", "for", "in", "is",
                                             "and", "or", "not", "True", "False", "None"};
    return kw;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::vector<Stmt> program() {
        std::vector<Stmt> out;
        while (peek().kind != TokKind::End) {
            if (peek().kind == TokKind::Newline) {
                next();
                continue;
            }
            if (peek().kind == TokKind::Indent) throw SyntaxError(peek().loc, "unexpected indent");
            out.push_back(statement());
        }
        return out;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool is_op(std::string_view text, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == TokKind::Op && t.text == text;
    }
    bool is_name(std::string_view text, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == TokKind::Name && t.text == text;
    }
    void expect_op(std::string_view text) {
        if (!is_op(text)) {
            throw SyntaxError(peek().loc, "expected '" + std::string(text) + "', found " + describe(peek()));
        }
        next();
    }
    void expect_name(std::string_view text) {
        if (!is_name(text)) {
            throw SyntaxError(peek().loc, "expected '" + std::string(text) + "', found " + describe(peek()));
        }
        next();
    }
    static std::string describe(const Token& t) {
        switch (t.kind) {
            case TokKind::Newline: return "end of line";
            case TokKind::Indent: return "indent";
            case TokKind::Dedent: return "dedent";
            case TokKind::End: return "end of input";
            case TokKind::String: return "string literal";
            default: return "'" + t.text + "'";
        }
    }
    std::string identifier() {
        const Token& t = peek();
        if (t.kind != TokKind::Name) throw SyntaxError(t.loc, "expected a name, found " + describe(t));
        check_not_keyword(t);
        return next().text;
    }
    void check_not_keyword(const Token& t) const {
        if (forbidden_keywords().count(t.text)) throw ForbiddenConstruct(t.text, t.loc);
        if (reserved_words().count(t.text)) throw SyntaxError(t.loc, "unexpected keyword '" + t.text + "'");
    }

    // Each statement numbers its own call sites; nested bodies open a
    // fresh counter while guards and iterables reuse the enclosing one.
    struct SiteScope {
        explicit SiteScope(std::vector<int>& s) : stack(s) { stack.push_back(0); }
        ~SiteScope() { stack.pop_back(); }
        std::vector<int>& stack;
    };

    Stmt statement() {
        SiteScope scope(sites_);
        const Token& t = peek();
        if (t.kind == TokKind::Name) {
            if (t.text == "if") return if_statement();
            if (t.text == "for") return for_statement();
            if (t.text == "elif" || t.text == "else") {
                throw SyntaxError(t.loc, "'" + t.text + "' without a matching 'if'");
            }
        }
        Stmt s = simple_statement();
        end_of_simple();
        return s;
    }

    void end_of_simple() {
        if (is_op(";")) throw ForbiddenConstruct("semicolon", peek().loc);
        if (peek().kind == TokKind::Newline) {
            next();
            return;
        }
        if (peek().kind == TokKind::End || peek().kind == TokKind::Dedent) return;
        throw SyntaxError(peek().loc, "expected end of line, found " + describe(peek()));
    }

    Stmt simple_statement() {
        const Token& t = peek();
        int line = t.loc.line;
        if (t.kind == TokKind::Name && forbidden_keywords().count(t.text)) {
            throw ForbiddenConstruct(t.text, t.loc);
        }
        if (t.kind == TokKind::Name && t.text == "print" && is_op("(", 1)) {
            next();
            next();
            Print p;
            while (!is_op(")")) {
                if (is_op("*") || is_op("**")) throw ForbiddenConstruct("star-args", peek().loc);
                if (peek().kind == TokKind::Name && is_op("=", 1)) {
                    throw SyntaxError(peek().loc, "print does not take keyword arguments");
                }
                p.args.push_back(expression());
                if (!is_op(",")) break;
                next();
            }
            expect_op(")");
            return Stmt(std::move(p), line);
        }

        SourceLoc start = t.loc;
        Expr lhs = expression();
        if (is_op(",")) {
            throw ForbiddenConstruct("tuple-assignment", peek().loc);
        }
        static const std::set<std::string> augmented = {"+=", "-=", "*=", "/=", "%=", "//=",
                                                        "**=", "&=", "|=", "^=", ">>=", "<<="};
        if (peek().kind == TokKind::Op && augmented.count(peek().text)) {
            throw ForbiddenConstruct("augmented-assignment", peek().loc);
        }
        if (is_op(":")) throw ForbiddenConstruct("annotation", peek().loc);
        if (!is_op("=")) return Stmt(ExprStmt{std::move(lhs)}, line);

        const Token& eq = next();
        const auto* name = lhs.as<NameRef>();
        if (name == nullptr) {
            if (lhs.as<AttrAccess>() || lhs.as<KeyLit>()) throw ForbiddenConstruct("attribute-assignment", eq.loc);
            if (lhs.as<TupleLit>() || lhs.as<ListLit>()) throw ForbiddenConstruct("tuple-assignment", eq.loc);
            throw SyntaxError(start, "cannot assign to this expression");
        }
        if (name->name == "Instruction" || name->name == "print" || name->name == "Key") {
            throw SyntaxError(start, "cannot rebind builtin '" + name->name + "'");
        }
        Expr rhs = expression();
        if (is_op("=")) throw ForbiddenConstruct("chained-assignment", peek().loc);
        if (is_op(",")) throw ForbiddenConstruct("tuple-assignment", peek().loc);
        return Stmt(Assign{name->name, std::move(rhs)}, line);
    }

    std::vector<Stmt> suite() {
        expect_op(":");
        std::vector<Stmt> body;
        if (peek().kind != TokKind::Newline) {
            SiteScope scope(sites_);
            body.push_back(simple_statement());
            end_of_simple();
            return body;
        }
        next();
        if (peek().kind != TokKind::Indent) throw SyntaxError(peek().loc, "expected an indented block");
        next();
        while (peek().kind != TokKind::Dedent && peek().kind != TokKind::End) {
            if (peek().kind == TokKind::Newline) {
                next();
                continue;
            }
            body.push_back(statement());
        }
        if (peek().kind == TokKind::Dedent) next();
        return body;
    }

    Stmt if_statement() {
        int line = peek().loc.line;
        If node;
        next();
        Expr guard = expression();
        node.branches.push_back(IfBranch{std::move(guard), suite()});
        while (is_name("elif")) {
            next();
            Expr g = expression();
            node.branches.push_back(IfBranch{std::move(g), suite()});
        }
        if (is_name("else")) {
            next();
            node.else_body = suite();
        }
        return Stmt(std::move(node), line);
    }

    Stmt for_statement() {
        int line = peek().loc.line;
        next();
        For node;
        bool parenthesized = false;
        if (is_op("(")) {
            parenthesized = true;
            next();
        }
        node.targets.push_back(identifier());
        while (is_op(",")) {
            next();
            if (peek().kind != TokKind::Name) break;
            node.targets.push_back(identifier());
        }
        if (parenthesized) expect_op(")");
        expect_name("in");
        node.iterable = expression();
        if (is_op(",")) throw SyntaxError(peek().loc, "loop iterable must be a single expression");
        node.body = suite();
        if (is_name("else")) throw ForbiddenConstruct("for-else", peek().loc);
        return Stmt(std::move(node), line);
    }

    Expr expression() {
        Expr e = or_test();
        if (is_name("if")) throw ForbiddenConstruct("conditional-expression", peek().loc);
        return e;
    }

    Expr or_test() {
        int line = peek().loc.line;
        Expr first = and_test();
        if (!is_name("or")) return first;
        BoolOp op{BoolKind::Or, {}};
        op.operands.push_back(std::move(first));
        while (is_name("or")) {
            next();
            op.operands.push_back(and_test());
        }
        return Expr(std::move(op), line);
    }

    Expr and_test() {
        int line = peek().loc.line;
        Expr first = not_test();
        if (!is_name("and")) return first;
        BoolOp op{BoolKind::And, {}};
        op.operands.push_back(std::move(first));
        while (is_name("and")) {
            next();
            op.operands.push_back(not_test());
        }
        return Expr(std::move(op), line);
    }

    Expr not_test() {
        if (is_name("not")) {
            int line = next().loc.line;
            return Expr(NotOp{not_test()}, line);
        }
        return comparison();
    }

    Expr comparison() {
        int line = peek().loc.line;
        Expr lhs = arith();
        Expr result;
        if (is_op("==") || is_op("!=")) {
            CmpOp op = peek().text == "==" ? CmpOp::Eq : CmpOp::Ne;
            next();
            Expr rhs = arith();
            result = Expr(Compare{std::move(lhs), op, std::move(rhs)}, line);
        } else if (is_name("is")) {
            SourceLoc loc = next().loc;
            CmpOp op = CmpOp::IsNone;
            if (is_name("not")) {
                next();
                op = CmpOp::IsNotNone;
            }
            if (!is_name("None")) throw ForbiddenConstruct("identity-comparison", loc);
            next();
            result = Expr(Compare{std::move(lhs), op, Expr(NoneLit{}, line)}, line);
        } else if (is_op("<") || is_op(">") || is_op("<=") || is_op(">=") || is_op("<>")) {
            throw ForbiddenConstruct("ordering-comparison", peek().loc);
        } else if (is_name("in") || (is_name("not") && is_name("in", 1))) {
            throw ForbiddenConstruct("membership-test", peek().loc);
        } else {
            return lhs;
        }
        if (is_op("==") || is_op("!=") || is_name("is") || is_op("<") || is_op(">") ||
            is_op("<=") || is_op(">=") || is_name("in")) {
            throw ForbiddenConstruct("chained-comparison", peek().loc);
        }
        return result;
    }

    static bool is_arith_op(const Token& t) {
        static const std::set<std::string> ops = {"+", "-", "*", "/", "%", "**", "//",
                                                  "@", "|", "&", "^", "<<", ">>", "~"};
        return t.kind == TokKind::Op && ops.count(t.text) > 0;
    }

    Expr arith() {
        Expr e = unary();
        if (is_arith_op(peek())) throw ForbiddenConstruct("arithmetic", peek().loc);
        return e;
    }

    Expr unary() {
        if (is_op("-") || is_op("+")) {
            const Token& sign = next();
            const Token& t = peek();
            bool neg = sign.text == "-";
            if (t.kind == TokKind::Int) {
                next();
                long long v = std::strtoll(t.text.c_str(), nullptr, 10);
                return Expr(IntLit{neg ? -v : v}, sign.loc.line);
            }
            if (t.kind == TokKind::Float) {
                next();
                double v = std::strtod(t.text.c_str(), nullptr);
                return Expr(FloatLit{neg ? -v : v}, sign.loc.line);
            }
            throw ForbiddenConstruct("arithmetic", sign.loc);
        }
        if (is_op("~")) throw ForbiddenConstruct("arithmetic", peek().loc);
        if (is_op("*") || is_op("**")) throw ForbiddenConstruct("star-args", peek().loc);
        return postfix();
    }

    Expr postfix() {
        const Token& start = peek();
        int line = start.loc.line;
        if (start.kind == TokKind::Name && is_op("(", 1) && !reserved_words().count(start.text) &&
            !forbidden_keywords().count(start.text)) {
            if (start.text == "print") throw ForbiddenConstruct("print-expression", start.loc);
            std::string callee = next().text;
            Expr e = (callee == "range") ? range_call(line) : call(std::move(callee), line);
            return trailers(std::move(e));
        }
        return trailers(atom());
    }

    Expr trailers(Expr e) {
        while (true) {
            if (is_op(".")) {
                next();
                const Token& f = peek();
                if (f.kind != TokKind::Name) throw SyntaxError(f.loc, "expected attribute name");
                next();
                if (const auto* base = e.as<NameRef>(); base != nullptr && base->name == "Key") {
                    e = Expr(KeyLit{f.text}, e.line);
                } else {
                    e = Expr(AttrAccess{std::move(e), f.text}, e.line);
                }
            } else if (is_op("(")) {
                throw ForbiddenConstruct("computed-callee", peek().loc);
            } else if (is_op("[")) {
                throw ForbiddenConstruct("subscript", peek().loc);
            } else {
                return e;
            }
        }
    }

    Expr range_call(int line) {
        expect_op("(");
        Expr count = expression();
        if (is_op(",")) throw ForbiddenConstruct("range-step", peek().loc);
        expect_op(")");
        return Expr(RangeExpr{std::move(count)}, line);
    }

    Expr call(std::string callee, int line) {
        CallExpr c;
        c.callee = std::move(callee);
        c.site = sites_.back()++;
        expect_op("(");
        while (!is_op(")")) {
            if (is_op("*") || is_op("**")) throw ForbiddenConstruct("star-args", peek().loc);
            if (peek().kind == TokKind::Name && is_op("=", 1)) {
                std::string name = identifier();
                next();
                for (const auto& k : c.kw_names) {
                    if (k == name) throw SyntaxError(peek().loc, "duplicate keyword argument '" + name + "'");
                }
                c.kw_names.push_back(std::move(name));
                c.kw_values.push_back(expression());
            } else {
                if (!c.kw_names.empty()) {
                    throw SyntaxError(peek().loc, "positional argument follows keyword argument");
                }
                Expr arg = expression();
                if (is_name("for")) throw ForbiddenConstruct("comprehension", peek().loc);
                c.args.push_back(std::move(arg));
            }
            if (!is_op(",")) break;
            next();
        }
        expect_op(")");
        return Expr(std::move(c), line);
    }

    Expr atom() {
        const Token& t = peek();
        int line = t.loc.line;
        switch (t.kind) {
            case TokKind::Int: {
                next();
                errno = 0;
                long long v = std::strtoll(t.text.c_str(), nullptr, 10);
                if (errno == ERANGE) throw SyntaxError(t.loc, "integer literal out of range");
                return Expr(IntLit{v}, line);
            }
            case TokKind::Float:
                next();
                return Expr(FloatLit{std::strtod(t.text.c_str(), nullptr)}, line);
            case TokKind::String: {
                std::string value = next().text;
                while (peek().kind == TokKind::String) value += next().text;
                return Expr(StrLit{std::move(value)}, line);
            }
            case TokKind::Name: {
                if (t.text == "True" || t.text == "False") {
                    next();
                    return Expr(BoolLit{t.text == "True"}, line);
                }
                if (t.text == "None") {
                    next();
                    return Expr(NoneLit{}, line);
                }
                if (t.text == "lambda" || t.text == "yield" || t.text == "await") {
                    throw ForbiddenConstruct(t.text, t.loc);
                }
                check_not_keyword(t);
                next();
                return Expr(NameRef{t.text}, line);
            }
            case TokKind::Op:
                if (t.text == "[") return list_literal();
                if (t.text == "(") return paren();
                if (t.text == "{") throw ForbiddenConstruct("dict-or-set-literal", t.loc);
                throw SyntaxError(t.loc, "unexpected " + describe(t));
            default:
                throw SyntaxError(t.loc, "unexpected " + describe(t));
        }
    }

    Expr list_literal() {
        int line = next().loc.line;
        ListLit l;
        while (!is_op("]")) {
            l.items.push_back(expression());
            if (is_name("for")) throw ForbiddenConstruct("comprehension", peek().loc);
            if (!is_op(",")) break;
            next();
        }
        expect_op("]");
        return Expr(std::move(l), line);
    }

    Expr paren() {
        int line = next().loc.line;
        if (is_op(")")) {
            next();
            return Expr(TupleLit{}, line);
        }
        Expr first = expression();
        if (is_name("for")) throw ForbiddenConstruct("comprehension", peek().loc);
        if (is_op(")")) {
            next();
            return first;
        }
        TupleLit tup;
        tup.items.push_back(std::move(first));
        while (is_op(",")) {
            next();
            if (is_op(")")) break;
            tup.items.push_back(expression());
        }
        expect_op(")");
        return Expr(std::move(tup), line);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<int> sites_;
};

}  // namespace

Program parse_plan(std::string_view source) {
    g_parse_count.fetch_add(1, std::memory_order_relaxed);
    Program p;
    p.statements = Parser(tokenize(source)).program();
    p.source_digest = sha256_hex(source);
    return p;
}

std::uint64_t parse_invocations() { return g_parse_count.load(std::memory_order_relaxed); }

}  // namespace cuaplan::plan
