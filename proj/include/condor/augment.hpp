#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "condor/corpus.hpp"

namespace condor {

// One contiguous change against the buggy file: at 1-based line old_start,
// old_lines are removed and new_lines inserted. Pure insertions have empty
// old_lines and insert before line old_start.
struct Hunk {
    std::size_t old_start = 1;
    std::vector<std::string> old_lines;
    std::vector<std::string> new_lines;
};

// Ordered hunks transforming source into target. Hunks are sorted by
// old_start and non-overlapping; applying all of them reproduces target
// byte-exactly.
struct DiffScript {
    std::vector<Hunk> hunks;
    std::string source;
    std::string target;
};

struct IntermediateVersion {
    std::string code;
    std::size_t applied_count = 0;  // hunks applied, 1..n-1
};

// A document is exactly join("\n", segments); splitting and joining round-trip
// byte-for-byte, including the empty final segment of newline-terminated text.
std::vector<std::string> split_lines(const std::string& text);
std::string join_lines(const std::vector<std::string>& lines);

// Minimal LCS line diff as maximal runs of consecutive changed lines, with
// zero context lines. No splitting; this is the raw hunk decomposition.
std::vector<Hunk> line_diff(const std::vector<std::string>& old_lines,
                            const std::vector<std::string>& new_lines);

// Applies hunks to lines in document order, tracking the line-count drift
// introduced by earlier hunks.
std::vector<std::string> apply_hunks(const std::vector<std::string>& lines,
                                     const std::vector<Hunk>& hunks);

// line_diff(buggy, correct), then: if the diff is exactly one hunk, that hunk
// is split into per-line deltas by positional alignment of removed and
// inserted lines, surplus lines of the longer side becoming individual
// pure-insert or pure-delete deltas.
DiffScript compute_hunks(const std::string& buggy, const std::string& correct);

// The n-1 strict intermediates of the cumulative application chain
// source -> +h1 -> +h1+h2 -> ... -> target. Throws DataError if applying all
// hunks does not reproduce the target.
std::vector<IntermediateVersion> generate_intermediates(const DiffScript& script);

// Per-line trailing spaces and tabs stripped; the normalization used for
// intermediate deduplication.
std::string strip_trailing_ws(const std::string& code);

// Generates intermediates for every triple and wraps each as an Error-labeled
// sample with origin "intermediate". Intermediates that normalize-equal any
// same-problem existing sample, either endpoint of their triple, or an
// already-emitted intermediate are dropped. Returns only the new samples.
std::vector<CodeSample> augment_dataset(const std::vector<RepairTriple>& triples,
                                        const std::vector<CodeSample>& existing);

}  // namespace condor
