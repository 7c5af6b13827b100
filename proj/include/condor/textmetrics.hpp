#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace condor {

using TokenSeq = std::vector<std::string>;

// Rule-based code tokenizer. Splits on whitespace, emits every other
// non-alphanumeric character as a single-char token, and breaks identifier
// runs at underscores, lowercase->uppercase boundaries, and letter<->digit
// boundaries. Underscores are separators, never tokens. Case is preserved.
// Bytes >= 0x80 are treated as caseless letters so UTF-8 sequences stay
// inside one token.
//
//   "a = b+1"     -> [a, =, b, +, 1]
//   "fooBar_baz2" -> [foo, Bar, baz, 2]
TokenSeq tokenize(std::string_view code);

// Token-level Levenshtein distance, unit cost for insert/delete/substitute.
std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b);

// Jaccard similarity over distinct-token sets. Both empty -> 1.0.
double jaccard(const TokenSeq& a, const TokenSeq& b);
double jaccard(std::string_view code_a, std::string_view code_b);

// Relative edit distance: ED / mean token count of the two sides.
// Always in [0, 2]; both sides empty -> 0.
double red(std::string_view buggy, std::string_view correct);

}  // namespace condor
