#include "condor/evalrank.hpp"

#include <algorithm>

#include "condor/corpus.hpp"
#include "condor/errors.hpp"
#include "jsonl_io.hpp"

namespace condor {

using detail::ordered_json;

std::size_t select(const std::vector<double>& probs) {
    if (probs.empty()) throw UsageError("cannot select from an empty probability list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[best]) best = i;
    }
    return best;
}

std::vector<RankResult> rank_candidates(const EncoderParams& params,
                                        const std::vector<CandidateSet>& sets) {
    std::vector<RankResult> results;
    results.reserve(sets.size());
    for (const auto& set : sets) {
        if (set.candidates.empty()) {
            throw UsageError("candidate set \"" + set.problem_id + "\" has no candidates");
        }
        RankResult r;
        r.problem_id = set.problem_id;
        r.probs.reserve(set.candidates.size());
        for (const auto& c : set.candidates) {
            r.probs.push_back(predict_prob(params, set.problem, c.code));
        }
        r.selected = select(r.probs);
        results.push_back(std::move(r));
    }
    return results;
}

double pass_at_1(const std::vector<CandidateSet>& sets,
                 const std::vector<RankResult>& results) {
    if (sets.size() != results.size()) {
        throw UsageError("candidate sets and rank results differ in length");
    }
    if (sets.empty()) return 0.0;

    std::size_t hits = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const CandidateSet& set = sets[i];
        const RankResult& r = results[i];
        if (set.problem_id != r.problem_id) {
            throw UsageError("candidate sets and rank results are not aligned at \"" +
                             set.problem_id + "\"");
        }
        if (r.selected >= set.candidates.size()) {
            throw UsageError("rank result for \"" + set.problem_id +
                             "\" selects a nonexistent candidate");
        }
        for (const auto& c : set.candidates) {
            if (!c.label.has_value()) {
                throw DataError("candidate set \"" + set.problem_id +
                                "\" is missing a ground-truth label");
            }
        }
        if (set.candidates[r.selected].label.value() == 1) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(sets.size());
}

ClassificationMetrics metrics_from_confusion(const ConfusionCounts& counts) {
    ClassificationMetrics m;
    double tp = static_cast<double>(counts.tp);
    double fp = static_cast<double>(counts.fp);
    double fn = static_cast<double>(counts.fn);
    m.precision = counts.tp + counts.fp > 0 ? tp / (tp + fp) : 0.0;
    m.recall = counts.tp + counts.fn > 0 ? tp / (tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

ClassificationMetrics classification_metrics(const std::vector<int>& preds,
                                             const std::vector<int>& labels) {
    if (preds.size() != labels.size()) {
        throw UsageError("predictions and labels differ in length");
    }
    if (preds.empty()) throw UsageError("cannot compute metrics on empty input");

    ConfusionCounts counts;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == 1) {
            labels[i] == 1 ? ++counts.tp : ++counts.fp;
        } else {
            labels[i] == 1 ? ++counts.fn : ++counts.tn;
        }
    }
    return metrics_from_confusion(counts);
}

std::vector<int> classify(const EncoderParams& params,
                          const std::vector<LabeledSample>& samples, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw UsageError("classification threshold must lie strictly inside (0, 1)");
    }
    std::vector<int> preds;
    preds.reserve(samples.size());
    for (const auto& s : samples) {
        preds.push_back(predict_prob(params, s.problem, s.code) >= threshold ? 1 : 0);
    }
    return preds;
}

std::vector<CandidateSet> load_candidate_sets(const std::string& path) {
    std::vector<CandidateSet> sets;
    detail::for_each_record(path, [&](std::size_t, const ordered_json& record) {
        CandidateSet set;
        set.problem_id = detail::require_string(record, "problem_id");
        set.problem = normalize_newlines(detail::require_string(record, "problem"));
        auto candidates = record.find("candidates");
        if (candidates == record.end()) throw DataError("missing field \"candidates\"");
        if (!candidates->is_array() || candidates->empty()) {
            throw DataError("field \"candidates\" must be a non-empty array");
        }
        for (const auto& entry : *candidates) {
            if (!entry.is_object()) throw DataError("candidate entries must be objects");
            Candidate c;
            c.code = normalize_newlines(detail::require_string(entry, "code"));
            auto label = entry.find("label");
            if (label != entry.end()) {
                if (!label->is_number_integer()) throw DataError("field \"label\" must be 0 or 1");
                int value = label->get<int>();
                if (value != 0 && value != 1) throw DataError("field \"label\" must be 0 or 1");
                c.label = value;
            }
            set.candidates.push_back(std::move(c));
        }
        sets.push_back(std::move(set));
    });
    return sets;
}

std::string to_record_line(const CandidateSet& set) {
    ordered_json record;
    record["problem_id"] = set.problem_id;
    record["problem"] = set.problem;
    ordered_json candidates = ordered_json::array();
    for (const auto& c : set.candidates) {
        ordered_json entry;
        entry["code"] = c.code;
        if (c.label.has_value()) entry["label"] = *c.label;
        candidates.push_back(std::move(entry));
    }
    record["candidates"] = std::move(candidates);
    return record.dump();
}

void save_candidate_sets(const std::vector<CandidateSet>& sets, const std::string& path) {
    detail::write_lines_atomic(path, [&](std::ostream& out) {
        for (const auto& s : sets) out << to_record_line(s) << '\n';
    });
}

std::string to_record_line(const RankResult& result) {
    ordered_json record;
    record["problem_id"] = result.problem_id;
    record["probs"] = result.probs;
    record["selected"] = result.selected;
    return record.dump();
}

void save_rank_results(const std::vector<RankResult>& results, const std::string& path) {
    detail::write_lines_atomic(path, [&](std::ostream& out) {
        for (const auto& r : results) out << to_record_line(r) << '\n';
    });
}

}  // namespace condor
