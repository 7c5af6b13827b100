#include "condor/textmetrics.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace condor {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

// Letters include every byte >= 0x80 so multi-byte UTF-8 runs stay together.
bool is_letter(unsigned char c) { return is_lower(c) || is_upper(c) || c >= 0x80; }
bool is_word_char(unsigned char c) { return is_letter(c) || is_digit(c) || c == '_'; }

// Break an identifier run at underscores, lowercase->uppercase boundaries,
// and letter<->digit boundaries. Underscores are dropped.
void split_word_run(std::string_view run, TokenSeq& out) {
    std::string current;
    for (std::size_t i = 0; i < run.size(); ++i) {
        unsigned char c = run[i];
        if (c == '_') {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
            continue;
        }
        if (!current.empty()) {
            unsigned char prev = current.back();
            bool case_boundary = is_lower(prev) && is_upper(c);
            bool digit_boundary = is_letter(prev) != is_letter(c);
            if (case_boundary || digit_boundary) {
                out.push_back(std::move(current));
                current.clear();
            }
        }
        current.push_back(static_cast<char>(c));
    }
    if (!current.empty()) out.push_back(std::move(current));
}

std::unordered_set<std::string_view> distinct_tokens(const TokenSeq& seq) {
    std::unordered_set<std::string_view> set;
    set.reserve(seq.size());
    for (const auto& t : seq) set.insert(t);
    return set;
}

}  // namespace

TokenSeq tokenize(std::string_view code) {
    TokenSeq out;
    std::size_t i = 0;
    while (i < code.size()) {
        unsigned char c = code[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (is_word_char(c)) {
            std::size_t begin = i;
            while (i < code.size() && is_word_char(static_cast<unsigned char>(code[i]))) ++i;
            split_word_run(code.substr(begin, i - begin), out);
            continue;
        }
        out.emplace_back(1, static_cast<char>(c));
        ++i;
    }
    return out;
}

std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();

    // Two-row Levenshtein DP, unit costs.
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> curr(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;

    for (std::size_t i = 1; i <= a.size(); ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

double jaccard(const TokenSeq& a, const TokenSeq& b) {
    auto set_a = distinct_tokens(a);
    auto set_b = distinct_tokens(b);
    if (set_a.empty() && set_b.empty()) return 1.0;

    std::size_t intersection = 0;
    for (const auto& t : set_a) {
        if (set_b.count(t) > 0) ++intersection;
    }
    std::size_t uni = set_a.size() + set_b.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(uni);
}

double jaccard(std::string_view code_a, std::string_view code_b) {
    return jaccard(tokenize(code_a), tokenize(code_b));
}

double red(std::string_view buggy, std::string_view correct) {
    TokenSeq a = tokenize(buggy);
    TokenSeq b = tokenize(correct);
    if (a.empty() && b.empty()) return 0.0;
    double mean_len = (static_cast<double>(a.size()) + static_cast<double>(b.size())) / 2.0;
    return static_cast<double>(edit_distance(a, b)) / mean_len;
}

}  // namespace condor
