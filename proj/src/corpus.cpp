#include "condor/corpus.hpp"

#include <set>

#include "condor/errors.hpp"
#include "condor/textmetrics.hpp"
#include "jsonl_io.hpp"

namespace condor {

using detail::ordered_json;

const char* to_string(Verdict v) {
    return v == Verdict::Correct ? "correct" : "error";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "correct") return Verdict::Correct;
    if (s == "error") return Verdict::Error;
    throw DataError("field \"verdict\" must be \"correct\" or \"error\", got \"" + s + "\"");
}

std::string normalize_newlines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            out.push_back('\n');
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

namespace {

std::uint64_t optional_order(const ordered_json& record) {
    auto it = record.find("order");
    if (it == record.end()) return 0;
    if (!it->is_number_unsigned()) {
        throw DataError("field \"order\" must be a nonnegative integer");
    }
    return it->get<std::uint64_t>();
}

}  // namespace

std::vector<CodeSample> load_corpus(const std::string& path) {
    std::vector<CodeSample> samples;
    detail::for_each_record(path, [&](std::size_t, const ordered_json& record) {
        CodeSample s;
        s.problem_id = detail::require_string(record, "problem_id");
        s.problem = normalize_newlines(detail::require_string(record, "problem"));
        s.code = normalize_newlines(detail::require_string(record, "code"));
        s.verdict = verdict_from_string(detail::require_string(record, "verdict"));
        s.group = detail::optional_string(record, "group");
        s.order = optional_order(record);
        s.origin = detail::optional_string(record, "origin");
        if (detail::all_whitespace(s.code)) throw DataError("field \"code\" is empty");
        samples.push_back(std::move(s));
    });
    return samples;
}

std::string to_record_line(const CodeSample& sample) {
    ordered_json record;
    record["problem_id"] = sample.problem_id;
    record["problem"] = sample.problem;
    record["code"] = sample.code;
    record["verdict"] = to_string(sample.verdict);
    record["group"] = sample.group;
    record["order"] = sample.order;
    if (!sample.origin.empty()) record["origin"] = sample.origin;
    return record.dump();
}

void save_corpus(const std::vector<CodeSample>& samples, const std::string& path) {
    detail::write_lines_atomic(path, [&](std::ostream& out) {
        for (const auto& s : samples) out << to_record_line(s) << '\n';
    });
}

std::vector<RepairTriple> load_triples(const std::string& path) {
    std::vector<RepairTriple> triples;
    detail::for_each_record(path, [&](std::size_t, const ordered_json& record) {
        RepairTriple t;
        t.problem_id = detail::require_string(record, "problem_id");
        t.problem = normalize_newlines(detail::require_string(record, "problem"));
        t.buggy = normalize_newlines(detail::require_string(record, "buggy"));
        t.correct = normalize_newlines(detail::require_string(record, "correct"));
        if (t.buggy == t.correct) {
            throw DataError("fields \"buggy\" and \"correct\" are identical");
        }
        triples.push_back(std::move(t));
    });
    return triples;
}

std::string to_record_line(const RepairTriple& triple) {
    ordered_json record;
    record["problem_id"] = triple.problem_id;
    record["problem"] = triple.problem;
    record["buggy"] = triple.buggy;
    record["correct"] = triple.correct;
    return record.dump();
}

void save_triples(const std::vector<RepairTriple>& triples, const std::string& path) {
    detail::write_lines_atomic(path, [&](std::ostream& out) {
        for (const auto& t : triples) out << to_record_line(t) << '\n';
    });
}

CorpusStats corpus_stats(const std::vector<RepairTriple>& triples) {
    CorpusStats stats;
    stats.sample_count = triples.size();
    if (triples.empty()) return stats;

    std::set<std::string> problems;
    double problem_tokens = 0.0;
    double buggy_tokens = 0.0;
    double correct_tokens = 0.0;
    double ed_sum = 0.0;
    double red_sum = 0.0;
    for (const auto& t : triples) {
        problems.insert(t.problem_id);
        TokenSeq buggy = tokenize(t.buggy);
        TokenSeq correct = tokenize(t.correct);
        double ed = static_cast<double>(edit_distance(buggy, correct));
        problem_tokens += static_cast<double>(tokenize(t.problem).size());
        buggy_tokens += static_cast<double>(buggy.size());
        correct_tokens += static_cast<double>(correct.size());
        ed_sum += ed;
        if (!buggy.empty() || !correct.empty()) {
            red_sum += ed / ((static_cast<double>(buggy.size()) +
                              static_cast<double>(correct.size())) / 2.0);
        }
    }
    double n = static_cast<double>(triples.size());
    stats.problem_count = problems.size();
    stats.avg_problem_tokens = problem_tokens / n;
    stats.avg_buggy_tokens = buggy_tokens / n;
    stats.avg_correct_tokens = correct_tokens / n;
    stats.avg_edit_distance = ed_sum / n;
    stats.avg_relative_edit_distance = red_sum / n;
    return stats;
}

}  // namespace condor
