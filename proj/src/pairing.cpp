#include "condor/pairing.hpp"

#include <map>

#include "condor/errors.hpp"
#include "condor/textmetrics.hpp"
#include "jsonl_io.hpp"

namespace condor {

using detail::ordered_json;

namespace {

void check_threshold(double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw UsageError("similarity threshold must lie in [0, 1]");
    }
}

// Indices of `samples` grouped by problem_id, problems in sorted id order and
// samples in input order, so downstream output is deterministic.
std::map<std::string, std::vector<std::size_t>> group_by_problem(
    const std::vector<CodeSample>& samples) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        groups[samples[i].problem_id].push_back(i);
    }
    return groups;
}

}  // namespace

std::vector<ContrastPair> mine_pairs(const std::vector<CodeSample>& samples,
                                     double threshold) {
    check_threshold(threshold);
    std::vector<ContrastPair> pairs;

    for (const auto& [problem_id, members] : group_by_problem(samples)) {
        // Tokenize each member once; pairs reuse the distinct-token sets.
        std::vector<TokenSeq> tokens;
        tokens.reserve(members.size());
        for (std::size_t idx : members) tokens.push_back(tokenize(samples[idx].code));

        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                const CodeSample& a = samples[members[i]];
                const CodeSample& b = samples[members[j]];
                bool a_correct = a.verdict == Verdict::Correct;
                bool b_correct = b.verdict == Verdict::Correct;
                if (!a_correct && !b_correct) continue;  // E-E pairs carry no signal
                if (a.code == b.code) continue;

                double sim = jaccard(tokens[i], tokens[j]);
                if (sim < threshold) continue;

                ContrastPair pair;
                pair.problem_id = problem_id;
                pair.problem = a.problem;
                pair.similarity = sim;
                if (a_correct && b_correct) {
                    pair.label = 1;
                    pair.code_a = a.code;
                    pair.code_b = b.code;
                } else {
                    // E-C: the erroneous code always sits in code_a.
                    pair.label = 0;
                    pair.code_a = a_correct ? b.code : a.code;
                    pair.code_b = a_correct ? a.code : b.code;
                }
                pairs.push_back(std::move(pair));
            }
        }
    }
    return pairs;
}

std::vector<RepairTriple> build_triples(const std::vector<CodeSample>& samples,
                                        double threshold) {
    check_threshold(threshold);
    std::vector<RepairTriple> triples;

    for (const auto& [problem_id, members] : group_by_problem(samples)) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            const CodeSample& buggy = samples[members[i]];
            if (buggy.verdict != Verdict::Error) continue;
            for (std::size_t j = 0; j < members.size(); ++j) {
                const CodeSample& fixed = samples[members[j]];
                if (fixed.verdict != Verdict::Correct) continue;
                if (fixed.group != buggy.group) continue;
                if (fixed.order <= buggy.order) continue;  // fixes must follow bugs
                if (fixed.code == buggy.code) continue;
                if (jaccard(buggy.code, fixed.code) < threshold) continue;

                RepairTriple t;
                t.problem_id = problem_id;
                t.problem = buggy.problem;
                t.buggy = buggy.code;
                t.correct = fixed.code;
                triples.push_back(std::move(t));
            }
        }
    }
    return triples;
}

std::vector<ContrastPair> load_pairs(const std::string& path) {
    std::vector<ContrastPair> pairs;
    detail::for_each_record(path, [&](std::size_t, const ordered_json& record) {
        ContrastPair p;
        p.problem_id = detail::require_string(record, "problem_id");
        p.problem = normalize_newlines(detail::require_string(record, "problem"));
        p.code_a = normalize_newlines(detail::require_string(record, "code_a"));
        p.code_b = normalize_newlines(detail::require_string(record, "code_b"));
        auto label = record.find("label");
        if (label == record.end()) throw DataError("missing field \"label\"");
        if (!label->is_number_integer()) throw DataError("field \"label\" must be 0 or 1");
        p.label = label->get<int>();
        if (p.label != 0 && p.label != 1) throw DataError("field \"label\" must be 0 or 1");
        auto sim = record.find("jaccard");
        if (sim != record.end()) {
            if (!sim->is_number()) throw DataError("field \"jaccard\" must be a number");
            p.similarity = sim->get<double>();
        }
        pairs.push_back(std::move(p));
    });
    return pairs;
}

void save_pairs(const std::vector<ContrastPair>& pairs, const std::string& path) {
    detail::write_lines_atomic(path, [&](std::ostream& out) {
        for (const auto& p : pairs) out << to_record_line(p) << '\n';
    });
}

std::string to_record_line(const ContrastPair& pair) {
    ordered_json record;
    record["problem_id"] = pair.problem_id;
    record["problem"] = pair.problem;
    record["code_a"] = pair.code_a;
    record["code_b"] = pair.code_b;
    record["label"] = pair.label;
    record["jaccard"] = pair.similarity;
    return record.dump();
}

}  // namespace condor
