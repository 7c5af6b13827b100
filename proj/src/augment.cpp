#include "condor/augment.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "condor/errors.hpp"

namespace condor {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            lines.push_back(text.substr(begin, i - begin));
            begin = i + 1;
        }
    }
    lines.push_back(text.substr(begin));
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) out.push_back('\n');
        out += lines[i];
    }
    return out;
}

std::vector<Hunk> line_diff(const std::vector<std::string>& old_lines,
                            const std::vector<std::string>& new_lines) {
    const std::size_t n = old_lines.size();
    const std::size_t m = new_lines.size();

    // lcs[i][j] = LCS length of old_lines[i..] and new_lines[j..].
    std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            if (old_lines[i] == new_lines[j]) {
                lcs[i][j] = lcs[i + 1][j + 1] + 1;
            } else {
                lcs[i][j] = std::max(lcs[i + 1][j], lcs[i][j + 1]);
            }
        }
    }

    std::vector<Hunk> hunks;
    Hunk current;
    bool open = false;
    auto begin_or_extend = [&](std::size_t old_pos) {
        if (!open) {
            current = Hunk{};
            current.old_start = old_pos + 1;
            open = true;
        }
    };
    auto flush = [&] {
        if (open) {
            hunks.push_back(std::move(current));
            open = false;
        }
    };

    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n && j < m) {
        if (old_lines[i] == new_lines[j] && lcs[i][j] == lcs[i + 1][j + 1] + 1) {
            flush();
            ++i;
            ++j;
        } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
            begin_or_extend(i);
            current.old_lines.push_back(old_lines[i]);
            ++i;
        } else {
            begin_or_extend(i);
            current.new_lines.push_back(new_lines[j]);
            ++j;
        }
    }
    for (; i < n; ++i) {
        begin_or_extend(i);
        current.old_lines.push_back(old_lines[i]);
    }
    if (j < m) begin_or_extend(i);
    for (; j < m; ++j) {
        current.new_lines.push_back(new_lines[j]);
    }
    flush();
    return hunks;
}

std::vector<std::string> apply_hunks(const std::vector<std::string>& lines,
                                     const std::vector<Hunk>& hunks) {
    std::vector<std::string> result = lines;
    std::ptrdiff_t offset = 0;
    for (const Hunk& h : hunks) {
        std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(h.old_start) - 1 + offset;
        if (pos < 0 || pos + static_cast<std::ptrdiff_t>(h.old_lines.size()) >
                           static_cast<std::ptrdiff_t>(result.size())) {
            throw DataError("hunk at old line " + std::to_string(h.old_start) +
                            " falls outside the document");
        }
        for (std::size_t k = 0; k < h.old_lines.size(); ++k) {
            if (result[static_cast<std::size_t>(pos) + k] != h.old_lines[k]) {
                throw DataError("hunk at old line " + std::to_string(h.old_start) +
                                " does not match the document");
            }
        }
        auto at = result.begin() + pos;
        at = result.erase(at, at + static_cast<std::ptrdiff_t>(h.old_lines.size()));
        result.insert(at, h.new_lines.begin(), h.new_lines.end());
        offset += static_cast<std::ptrdiff_t>(h.new_lines.size()) -
                  static_cast<std::ptrdiff_t>(h.old_lines.size());
    }
    return result;
}

namespace {

// Per-line split of the single hunk: removed and inserted lines pair up
// positionally, surplus lines of the longer side become individual pure
// deltas. Surplus inserts all anchor at the first line past the removed
// block; cumulative application keeps them in order.
std::vector<Hunk> split_single_hunk(const Hunk& h) {
    std::vector<Hunk> deltas;
    const std::size_t paired = std::min(h.old_lines.size(), h.new_lines.size());
    for (std::size_t i = 0; i < paired; ++i) {
        Hunk d;
        d.old_start = h.old_start + i;
        d.old_lines = {h.old_lines[i]};
        d.new_lines = {h.new_lines[i]};
        deltas.push_back(std::move(d));
    }
    for (std::size_t i = paired; i < h.old_lines.size(); ++i) {
        Hunk d;
        d.old_start = h.old_start + i;
        d.old_lines = {h.old_lines[i]};
        deltas.push_back(std::move(d));
    }
    for (std::size_t i = paired; i < h.new_lines.size(); ++i) {
        Hunk d;
        d.old_start = h.old_start + h.old_lines.size();
        d.new_lines = {h.new_lines[i]};
        deltas.push_back(std::move(d));
    }
    return deltas;
}

}  // namespace

DiffScript compute_hunks(const std::string& buggy, const std::string& correct) {
    DiffScript script;
    script.source = buggy;
    script.target = correct;
    script.hunks = line_diff(split_lines(buggy), split_lines(correct));
    if (script.hunks.size() == 1) {
        script.hunks = split_single_hunk(script.hunks.front());
    }
    return script;
}

std::vector<IntermediateVersion> generate_intermediates(const DiffScript& script) {
    const std::size_t n = script.hunks.size();
    std::vector<IntermediateVersion> versions;

    std::vector<std::string> current = split_lines(script.source);
    std::ptrdiff_t offset = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Hunk& h = script.hunks[k];
        std::ptrdiff_t start = static_cast<std::ptrdiff_t>(h.old_start) + offset;
        if (start < 1) {
            throw DataError("hunk at old line " + std::to_string(h.old_start) +
                            " overlaps an earlier hunk");
        }
        std::vector<Hunk> adjusted{h};
        adjusted[0].old_start = static_cast<std::size_t>(start);
        current = apply_hunks(current, adjusted);
        offset += static_cast<std::ptrdiff_t>(h.new_lines.size()) -
                  static_cast<std::ptrdiff_t>(h.old_lines.size());
        if (k + 1 < n) {
            versions.push_back({join_lines(current), k + 1});
        }
    }
    if (join_lines(current) != script.target) {
        throw DataError("applying all hunks does not reproduce the target text");
    }
    return versions;
}

std::string strip_trailing_ws(const std::string& code) {
    std::vector<std::string> lines = split_lines(code);
    for (auto& line : lines) {
        std::size_t end = line.size();
        while (end > 0 && (line[end - 1] == ' ' || line[end - 1] == '\t')) --end;
        line.resize(end);
    }
    return join_lines(lines);
}

std::vector<CodeSample> augment_dataset(const std::vector<RepairTriple>& triples,
                                        const std::vector<CodeSample>& existing) {
    std::map<std::string, std::set<std::string>> existing_by_problem;
    for (const auto& s : existing) {
        existing_by_problem[s.problem_id].insert(strip_trailing_ws(s.code));
    }

    std::vector<CodeSample> out;
    std::set<std::string> emitted;
    for (const auto& t : triples) {
        DiffScript script = compute_hunks(t.buggy, t.correct);
        std::set<std::string> endpoints{strip_trailing_ws(t.buggy), strip_trailing_ws(t.correct)};
        const auto* known = [&]() -> const std::set<std::string>* {
            auto it = existing_by_problem.find(t.problem_id);
            return it == existing_by_problem.end() ? nullptr : &it->second;
        }();
        for (const auto& iv : generate_intermediates(script)) {
            std::string norm = strip_trailing_ws(iv.code);
            if (endpoints.count(norm) > 0) continue;
            if (known != nullptr && known->count(norm) > 0) continue;
            if (emitted.count(norm) > 0) continue;
            emitted.insert(norm);

            CodeSample s;
            s.problem_id = t.problem_id;
            s.problem = t.problem;
            s.code = iv.code;
            s.verdict = Verdict::Error;  // partial fixes are still buggy
            s.origin = "intermediate";
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace condor
