#include "cuaplan/util/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <regex>

namespace cuaplan::text {

namespace {

const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a", "an", "the", "to", "of", "in", "on", "or", "and", "for", "with",
        "is", "are", "am", "was", "were", "be", "been", "we", "us", "our",
        "you", "your", "i", "me", "my", "it", "its", "this", "that", "these",
        "those", "at", "by", "from", "as", "into", "onto", "any", "all",
        "some", "there", "here", "then", "now", "than", "so", "if", "not",
        "no", "yes", "do", "does", "can", "could", "should", "would", "will",
        "may", "might", "viewing", "visible", "view", "page", "currently",
        "current", "also", "just", "only", "very", "please", "which", "what",
        "where", "when", "who", "whose", "how", "such", "e", "g", "eg", "etc",
        "about", "above", "below", "over", "under", "up", "down", "out", "per",
        "via", "one", "each", "both", "either", "neither", "other", "another",
        "let", "shown", "show", "showing", "display", "displayed", "appear",
        "appears", "seem", "seems", "s", "t", "like", "labeled", "labelled",
        "clearly", "quickly", "specific", "inside", "within", "has", "have",
        "having", "being", "get", "open", "opened", "ready", "allowing",
    };
    return words;
}

// Stemmed form -> canonical term.
const std::map<std::string, std::string>& synonyms() {
    static const std::map<std::string, std::string> table = {
        {"accept", "accept"},   {"agree", "accept"},    {"allow", "accept"},
        {"ok", "accept"},       {"okay", "accept"},     {"consent", "accept"},
        {"cooki", "cookie"},    {"privaci", "cookie"},  {"gdpr", "cookie"},
        {"search", "search"},   {"find", "search"},     {"field", "field"},
        {"box", "field"},       {"input", "field"},     {"textbox", "field"},
        {"bar", "field"},       {"browser", "browser"}, {"chromium", "browser"},
        {"chrome", "browser"},  {"dismiss", "dismiss"}, {"close", "dismiss"},
    };
    return table;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : s) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string stem(std::string_view word) {
    std::string w = to_lower(word);
    if (ends_with(w, "ies") && w.size() > 4) w.erase(w.size() - 1);
    if (ends_with(w, "ing") && w.size() > 5) {
        w.erase(w.size() - 3);
    } else if (ends_with(w, "ed") && w.size() > 4) {
        w.erase(w.size() - 2);
    } else if (ends_with(w, "s") && !ends_with(w, "ss") && w.size() > 3) {
        w.erase(w.size() - 1);
    }
    if (ends_with(w, "e") && w.size() > 3) w.erase(w.size() - 1);
    if (ends_with(w, "y") && w.size() > 2) w.back() = 'i';
    return w;
}

std::vector<std::string> content_terms(std::string_view s) {
    static const std::regex aside(R"(\(\s*not\b[^)]*\))", std::regex::icase);
    const std::string cleaned = std::regex_replace(std::string(s), aside, " ");
    std::vector<std::string> out;
    for (const auto& w : words(cleaned)) {
        if (stopwords().count(w)) continue;
        std::string st = stem(w);
        if (stopwords().count(st)) continue;
        auto it = synonyms().find(st);
        out.push_back(it == synonyms().end() ? st : it->second);
    }
    return out;
}

std::set<std::string> term_set(std::string_view s) {
    auto terms = content_terms(s);
    return {terms.begin(), terms.end()};
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::size_t overlap(const std::set<std::string>& needles,
                    const std::set<std::string>& haystack) {
    std::size_t n = 0;
    for (const auto& t : needles) n += haystack.count(t);
    return n;
}

std::string format_number(double v) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string truncate_chars(std::string_view s, std::size_t max_chars) {
    return std::string(s.substr(0, std::min(max_chars, s.size())));
}

}  // namespace cuaplan::text
