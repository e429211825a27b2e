#include "cuaplan/plan/lexer.hpp"

#include <array>
#include <cctype>
#include <cstring>

namespace cuaplan::plan {

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        while (pos_ < src_.size()) {
            if (at_line_start_ && depth_ == 0) {
                if (!handle_indentation()) continue;
            }
            char c = src_[pos_];
            if (c == '\n') {
                newline();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
                advance();
                continue;
            }
            if (c == '#') {
                skip_comment();
                continue;
            }
            if (c == '\\') {
                line_continuation();
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
                static_cast<unsigned char>(c) >= 0x80) {
                name_or_prefixed_string();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '.' && pos_ + 1 < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                number();
                continue;
            }
            if (c == '"' || c == '\'') {
                string_literal(false);
                continue;
            }
            op();
        }
        if (!tokens_.empty() && tokens_.back().kind != TokKind::Newline) {
            push(TokKind::Newline, "", here());
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            push(TokKind::Dedent, "", here());
        }
        push(TokKind::End, "", here());
        return std::move(tokens_);
    }

private:
    SourceLoc here() const { return {line_, col_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void push(TokKind k, std::string text, SourceLoc loc) {
        tokens_.push_back(Token{k, std::move(text), loc});
    }

    void newline() {
        if (depth_ == 0 && !tokens_.empty() && tokens_.back().kind != TokKind::Newline &&
            tokens_.back().kind != TokKind::Indent && tokens_.back().kind != TokKind::Dedent) {
            push(TokKind::Newline, "", here());
        }
        advance();
        at_line_start_ = depth_ == 0;
    }

    void skip_comment() {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
    }

    void line_continuation() {
        SourceLoc loc = here();
        advance();
        if (pos_ < src_.size() && src_[pos_] == '\r') advance();
        if (pos_ >= src_.size() || src_[pos_] != '\n') {
            throw SyntaxError(loc, "unexpected character after line continuation");
        }
        advance();
    }

    // Returns false when the line was blank or comment-only and consumed.
    bool handle_indentation() {
        int width = 0;
        std::size_t p = pos_;
        while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t' || src_[p] == '\f')) {
            width = src_[p] == '\t' ? (width / 8 + 1) * 8 : width + 1;
            ++p;
        }
        if (p >= src_.size() || src_[p] == '\n' || src_[p] == '#' || src_[p] == '\r') {
            while (pos_ < p) advance();
            if (pos_ < src_.size() && src_[pos_] == '#') skip_comment();
            if (pos_ < src_.size() && src_[pos_] == '\r') advance();
            if (pos_ < src_.size()) advance();  // the newline
            return false;
        }
        while (pos_ < p) advance();
        at_line_start_ = false;
        if (width > indents_.back()) {
            indents_.push_back(width);
            push(TokKind::Indent, "", here());
        } else {
            while (width < indents_.back()) {
                indents_.pop_back();
                push(TokKind::Dedent, "", here());
            }
            if (width != indents_.back()) {
                throw SyntaxError(here(), "unindent does not match any outer indentation level");
            }
        }
        return true;
    }

    void name_or_prefixed_string() {
        SourceLoc loc = here();
        std::size_t start = pos_;
        while (pos_ < src_.size()) {
            unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (std::isalnum(c) || c == '_' || c >= 0x80) {
                advance();
            } else {
                break;
            }
        }
        std::string word(src_.substr(start, pos_ - start));
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'') && word.size() <= 2) {
            std::string prefix;
            for (char ch : word) prefix.push_back(static_cast<char>(std::tolower(ch)));
            bool known = true;
            bool raw = false;
            for (char ch : prefix) {
                if (ch == 'f') throw ForbiddenConstruct("f-string", loc);
                if (ch == 'b') throw ForbiddenConstruct("bytes-literal", loc);
                if (ch == 'r') {
                    raw = true;
                } else if (ch != 'u') {
                    known = false;
                }
            }
            if (known) {
                string_literal(raw, loc);
                return;
            }
        }
        push(TokKind::Name, std::move(word), loc);
    }

    void number() {
        SourceLoc loc = here();
        std::size_t start = pos_;
        bool is_float = false;
        auto digits = [&] {
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                advance();
            }
        };
        if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
            std::strchr("xXoObB", src_[pos_ + 1]) != nullptr) {
            throw SyntaxError(loc, "only decimal number literals are supported");
        }
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            is_float = true;
            advance();
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                is_float = true;
                digits();
            } else {
                throw SyntaxError(loc, "malformed exponent in number literal");
            }
        }
        if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])))) {
            throw SyntaxError(loc, "invalid number literal");
        }
        std::string text;
        for (std::size_t i = start; i < pos_; ++i) {
            if (src_[i] != '_') text.push_back(src_[i]);
        }
        push(is_float ? TokKind::Float : TokKind::Int, std::move(text), loc);
    }

    static void append_utf8(std::string& out, unsigned long cp) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }

    unsigned long hex_escape(int ndigits, SourceLoc loc) {
        unsigned long v = 0;
        for (int i = 0; i < ndigits; ++i) {
            if (pos_ >= src_.size() || !std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
                throw SyntaxError(loc, "truncated escape sequence");
            }
            char h = src_[pos_];
            v = v * 16 + static_cast<unsigned long>(std::isdigit(static_cast<unsigned char>(h))
                                                        ? h - '0'
                                                        : std::tolower(h) - 'a' + 10);
            advance();
        }
        return v;
    }

    void string_literal(bool raw) { string_literal(raw, here()); }

    void string_literal(bool raw, SourceLoc loc) {
        char quote = src_[pos_];
        bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote;
        advance();
        if (triple) {
            advance();
            advance();
        }
        std::string value;
        while (true) {
            if (pos_ >= src_.size()) throw SyntaxError(loc, "unterminated string literal");
            char c = src_[pos_];
            if (c == quote) {
                if (!triple) {
                    advance();
                    break;
                }
                if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote) {
                    advance();
                    advance();
                    advance();
                    break;
                }
            }
            if (c == '\n' && !triple) throw SyntaxError(loc, "unterminated string literal");
            if (c == '\\' && !raw) {
                advance();
                if (pos_ >= src_.size()) throw SyntaxError(loc, "unterminated string literal");
                char e = src_[pos_];
                advance();
                switch (e) {
                    case '\n': break;
                    case 'n': value.push_back('\n'); break;
                    case 't': value.push_back('\t'); break;
                    case 'r': value.push_back('\r'); break;
                    case '0': value.push_back('\0'); break;
                    case 'a': value.push_back('\a'); break;
                    case 'b': value.push_back('\b'); break;
                    case 'f': value.push_back('\f'); break;
                    case 'v': value.push_back('\v'); break;
                    case '\\': value.push_back('\\'); break;
                    case '\'': value.push_back('\''); break;
                    case '"': value.push_back('"'); break;
                    case 'x': append_utf8(value, hex_escape(2, loc)); break;
                    case 'u': append_utf8(value, hex_escape(4, loc)); break;
                    case 'U': append_utf8(value, hex_escape(8, loc)); break;
                    default:
                        value.push_back('\\');
                        value.push_back(e);
                }
                continue;
            }
            if (c == '\\' && raw && pos_ + 1 < src_.size()) {
                value.push_back(c);
                advance();
                value.push_back(src_[pos_]);
                advance();
                continue;
            }
            value.push_back(c);
            advance();
        }
        push(TokKind::String, std::move(value), loc);
    }

    void op() {
        SourceLoc loc = here();
        static const std::array<const char*, 22> three_or_two = {
            "**=", "//=", ">>=", "<<=", "...", "==", "!=", "<=", ">=", "**", "//",
            "->",  "+=",  "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "<<", ">>"};
        for (const char* candidate : three_or_two) {
            std::string_view cand(candidate);
            if (src_.substr(pos_, cand.size()) == cand) {
                for (std::size_t i = 0; i < cand.size(); ++i) advance();
                push(TokKind::Op, std::string(cand), loc);
                track_depth(cand);
                return;
            }
        }
        char c = src_[pos_];
        if (std::strchr("()[]{},:.=;+-*/%<>@&|^~", c) == nullptr) {
            throw SyntaxError(loc, std::string("unexpected character '") + c + "'");
        }
        advance();
        std::string text(1, c);
        track_depth(text);
        push(TokKind::Op, text, loc);
    }

    void track_depth(std::string_view t) {
        if (t == "(" || t == "[" || t == "{") {
            ++depth_;
        } else if ((t == ")" || t == "]" || t == "}") && depth_ > 0) {
            --depth_;
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int depth_ = 0;
    bool at_line_start_ = true;
    std::vector<int> indents_{0};
    std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace cuaplan::plan
