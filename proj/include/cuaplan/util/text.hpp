#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cuaplan::text {

std::string to_lower(std::string_view s);

// Lowercased alphanumeric runs; everything else separates words.
std::vector<std::string> words(std::string_view s);

// Light suffix stripping so that "products"/"product" and
// "browse"/"browsed"/"browsing" collapse onto one term.
std::string stem(std::string_view word);

// Stemmed, synonym-canonicalized words with stopwords removed.
// Parenthesized asides that start with "not" are dropped first, so
// "search box (not the address bar)" yields {search, field}.
std::vector<std::string> content_terms(std::string_view s);
std::set<std::string> term_set(std::string_view s);

bool contains_ci(std::string_view haystack, std::string_view needle);

// Number of terms of `needles` present in `haystack`.
std::size_t overlap(const std::set<std::string>& needles,
                    const std::set<std::string>& haystack);

// Shortest decimal rendering that reads back to the same double.
std::string format_number(double v);

std::string truncate_chars(std::string_view s, std::size_t max_chars);

}  // namespace cuaplan::text
