#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cuaplan/plan/errors.hpp"

namespace cuaplan::plan {

enum class TokKind { Name, Int, Float, String, Op, Newline, Indent, Dedent, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;  // decoded value for strings
    SourceLoc loc;
};

// Indentation-aware tokenizer for the Python-like plan surface syntax.
std::vector<Token> tokenize(std::string_view source);

}  // namespace cuaplan::plan
