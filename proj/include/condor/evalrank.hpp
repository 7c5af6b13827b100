#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "condor/model.hpp"

namespace condor {

struct Candidate {
    std::string code;
    std::optional<int> label;  // ground truth when known
};

// A problem plus its k candidate codes.
struct CandidateSet {
    std::string problem_id;
    std::string problem;
    std::vector<Candidate> candidates;
};

struct RankResult {
    std::string problem_id;
    std::vector<double> probs;
    std::size_t selected = 0;  // smallest index attaining the max prob
};

struct ClassificationMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;
};

// Smallest index attaining the maximum; UsageError on empty input.
std::size_t select(const std::vector<double>& probs);

// Scores every candidate with predict_prob and picks the argmax per set.
std::vector<RankResult> rank_candidates(const EncoderParams& params,
                                        const std::vector<CandidateSet>& sets);

// Fraction of sets whose selected candidate is labeled correct. Every
// candidate must carry a label; DataError names the offending set otherwise.
double pass_at_1(const std::vector<CandidateSet>& sets,
                 const std::vector<RankResult>& results);

// P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2PR/(P+R); 0/0 cases are 0.
ClassificationMetrics metrics_from_confusion(const ConfusionCounts& counts);
ClassificationMetrics classification_metrics(const std::vector<int>& preds,
                                             const std::vector<int>& labels);

// Prediction 1 iff predict_prob >= threshold; threshold must lie in (0, 1).
std::vector<int> classify(const EncoderParams& params,
                          const std::vector<LabeledSample>& samples,
                          double threshold = 0.5);

// Candidate-set record line:
//   {"problem_id":..,"problem":..,"candidates":[{"code":..,"label":1},..]}
// Rank output line: {"problem_id":..,"probs":[..],"selected":1}
std::vector<CandidateSet> load_candidate_sets(const std::string& path);
void save_candidate_sets(const std::vector<CandidateSet>& sets, const std::string& path);
void save_rank_results(const std::vector<RankResult>& results, const std::string& path);
std::string to_record_line(const CandidateSet& set);
std::string to_record_line(const RankResult& result);

}  // namespace condor
