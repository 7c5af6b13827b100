#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace condor {

enum class Verdict { Correct, Error };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);  // throws DataError

// One (problem, code, verdict) record, the atomic corpus unit.
// All text is UTF-8 with line endings normalized to LF on load.
struct CodeSample {
    std::string problem_id;
    std::string problem;
    std::string code;
    Verdict verdict = Verdict::Error;
    std::string group;       // submitting user group, may be empty
    std::uint64_t order = 0; // submission index within the group
    std::string origin;      // "" for real data, "intermediate" for synthetic
};

// A buggy submission paired with a later correct one for the same problem.
struct RepairTriple {
    std::string problem_id;
    std::string problem;
    std::string buggy;
    std::string correct;
};

// Aggregates in the shape of a dataset-statistics table row.
struct CorpusStats {
    std::size_t problem_count = 0;
    std::size_t sample_count = 0;
    double avg_problem_tokens = 0.0;
    double avg_buggy_tokens = 0.0;
    double avg_correct_tokens = 0.0;
    double avg_edit_distance = 0.0;
    double avg_relative_edit_distance = 0.0;
};

// Replaces CRLF and lone CR with LF.
std::string normalize_newlines(std::string_view text);

// One JSON object per line:
//   {"problem_id":..,"problem":..,"code":..,"verdict":"correct"|"error",
//    "group":..,"order":0}
// "origin" is accepted and emitted only when non-empty. group and order are
// optional on input. Malformed lines raise DataError naming line and field.
std::vector<CodeSample> load_corpus(const std::string& path);
void save_corpus(const std::vector<CodeSample>& samples, const std::string& path);
std::string to_record_line(const CodeSample& sample);

// Triple record line: {"problem_id":..,"problem":..,"buggy":..,"correct":..}
std::vector<RepairTriple> load_triples(const std::string& path);
void save_triples(const std::vector<RepairTriple>& triples, const std::string& path);
std::string to_record_line(const RepairTriple& triple);

// Averages over all triples; empty input yields all-zero stats.
CorpusStats corpus_stats(const std::vector<RepairTriple>& triples);

}  // namespace condor
