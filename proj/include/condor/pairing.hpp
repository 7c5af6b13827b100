#pragma once

#include <string>
#include <vector>

#include "condor/corpus.hpp"

namespace condor {

// Two same-problem codes with a same/different-functionality label.
// label 1: both correct (C-C). label 0: code_a erroneous, code_b correct (E-C).
struct ContrastPair {
    std::string problem_id;
    std::string problem;
    std::string code_a;
    std::string code_b;
    int label = 0;
    double similarity = 0.0;
};

constexpr double kDefaultJaccardThreshold = 0.9;

// Emits C-C (label 1) and E-C (label 0) pairs of same-problem samples whose
// Jaccard similarity clears the threshold. E-E pairs and byte-identical code
// pairs are skipped. Output is ordered by problem_id, then input order.
std::vector<ContrastPair> mine_pairs(const std::vector<CodeSample>& samples,
                                     double threshold = kDefaultJaccardThreshold);

// Pairs each Error submission with every later-ordered Correct submission of
// the same problem and group, keeping triples above the similarity threshold.
std::vector<RepairTriple> build_triples(const std::vector<CodeSample>& samples,
                                        double threshold = kDefaultJaccardThreshold);

// Pair record line: {"problem_id":..,"problem":..,"code_a":..,"code_b":..,
//                    "label":0|1,"jaccard":0.93}
std::vector<ContrastPair> load_pairs(const std::string& path);
void save_pairs(const std::vector<ContrastPair>& pairs, const std::string& path);
std::string to_record_line(const ContrastPair& pair);

}  // namespace condor
