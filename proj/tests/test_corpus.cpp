#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#include "condor/corpus.hpp"
#include "condor/errors.hpp"
#include "condor/training.hpp"

using namespace condor;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name) {
        path = std::filesystem::temp_directory_path() / ("condor_test_" + name);
    }
    ~TempFile() { std::filesystem::remove(path); }
    void write(const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    std::string read() const {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    }
};

CodeSample sample(const std::string& pid, const std::string& code, Verdict v,
                  const std::string& group = "g", std::uint64_t order = 0) {
    CodeSample s;
    s.problem_id = pid;
    s.problem = "desc of " + pid;
    s.code = code;
    s.verdict = v;
    s.group = group;
    s.order = order;
    return s;
}

}  // namespace

TEST_CASE("load_corpus reads well-formed lines in order") {
    TempFile f("corpus_ok.jsonl");
    f.write(
        R"({"problem_id":"p1","problem":"sum","code":"a+b","verdict":"correct","group":"u1","order":0})"
        "\n"
        R"({"problem_id":"p1","problem":"sum","code":"a-b","verdict":"error","group":"u1","order":1})"
        "\n"
        R"({"problem_id":"p2","problem":"mul","code":"a*b","verdict":"correct"})"
        "\n");
    auto samples = load_corpus(f.path.string());
    REQUIRE(samples.size() == 3);
    CHECK(samples[0].problem_id == "p1");
    CHECK(samples[0].verdict == Verdict::Correct);
    CHECK(samples[1].verdict == Verdict::Error);
    CHECK(samples[1].order == 1);
    CHECK(samples[2].group == "");  // optional fields default
    CHECK(samples[2].order == 0);
}

TEST_CASE("load_corpus of an empty file is empty") {
    TempFile f("corpus_empty.jsonl");
    f.write("");
    CHECK(load_corpus(f.path.string()).empty());
}

TEST_CASE("load_corpus rejects schema violations with line numbers") {
    TempFile f("corpus_bad.jsonl");
    f.write(
        R"({"problem_id":"p1","problem":"sum","code":"a+b","verdict":"correct"})"
        "\n"
        R"({"problem_id":"p1","problem":"sum","code":"a-b"})"
        "\n");
    CHECK_THROWS_WITH_AS(load_corpus(f.path.string()),
                         doctest::Contains(":2: missing field \"verdict\""), DataError);

    f.write(R"({"problem_id":"p1","problem":"x","code":"y","verdict":"maybe"})" "\n");
    CHECK_THROWS_AS(load_corpus(f.path.string()), DataError);

    f.write(R"({"problem_id":"p1","problem":"x","code":"   ","verdict":"error"})" "\n");
    CHECK_THROWS_WITH_AS(load_corpus(f.path.string()), doctest::Contains("\"code\" is empty"),
                         DataError);

    f.write("not json\n");
    CHECK_THROWS_WITH_AS(load_corpus(f.path.string()), doctest::Contains(":1: invalid JSON"),
                         DataError);
}

TEST_CASE("load_corpus fails loudly on a missing file") {
    CHECK_THROWS_WITH_AS(load_corpus("/nonexistent/condor.jsonl"),
                         doctest::Contains("/nonexistent/condor.jsonl"), DataError);
}

TEST_CASE("newlines are normalized to LF on load") {
    TempFile f("corpus_crlf.jsonl");
    f.write(R"({"problem_id":"p","problem":"x","code":"a\r\nb\rc","verdict":"error"})" "\n");
    auto samples = load_corpus(f.path.string());
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].code == "a\nb\nc");
}

TEST_CASE("corpus save/load round trip is byte-exact") {
    Rng rng(17);
    std::vector<CodeSample> samples;
    for (int i = 0; i < 20; ++i) {
        CodeSample s = sample("p" + std::to_string(rng.below(5)),
                              "line1\nline2 \"quoted\"\n\ttab" + std::to_string(i),
                              rng.below(2) == 0 ? Verdict::Correct : Verdict::Error,
                              "g" + std::to_string(rng.below(3)), rng.below(100));
        if (rng.below(3) == 0) s.origin = "intermediate";
        samples.push_back(std::move(s));
    }

    TempFile f1("roundtrip1.jsonl");
    TempFile f2("roundtrip2.jsonl");
    save_corpus(samples, f1.path.string());
    auto loaded = load_corpus(f1.path.string());
    save_corpus(loaded, f2.path.string());
    CHECK(f1.read() == f2.read());
    REQUIRE(loaded.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(loaded[i].code == samples[i].code);
        CHECK(loaded[i].origin == samples[i].origin);
    }
}

TEST_CASE("triple record round trip and validation") {
    TempFile f("triples.jsonl");
    RepairTriple t{"p1", "sum", "a+b", "a-b"};
    save_triples({t}, f.path.string());
    auto loaded = load_triples(f.path.string());
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].buggy == "a+b");

    f.write(R"({"problem_id":"p","problem":"x","buggy":"same","correct":"same"})" "\n");
    CHECK_THROWS_AS(load_triples(f.path.string()), DataError);
}

TEST_CASE("corpus_stats hand-worked example") {
    // Two triples on one problem, each 5 tokens per side with one token edit.
    std::vector<RepairTriple> triples = {
        {"p1", "sum", "a = b + 1", "a = b - 1"},
        {"p1", "sum", "x = y * 2", "x = y / 2"},
    };
    CorpusStats stats = corpus_stats(triples);
    CHECK(stats.problem_count == 1);
    CHECK(stats.sample_count == 2);
    CHECK(stats.avg_edit_distance == doctest::Approx(1.0));
    CHECK(stats.avg_relative_edit_distance == doctest::Approx(0.2));
    CHECK(stats.avg_buggy_tokens == doctest::Approx(5.0));
    CHECK(stats.avg_correct_tokens == doctest::Approx(5.0));
    CHECK(stats.avg_problem_tokens == doctest::Approx(1.0));
}

TEST_CASE("corpus_stats on empty input is all zeros") {
    CorpusStats stats = corpus_stats({});
    CHECK(stats.problem_count == 0);
    CHECK(stats.sample_count == 0);
    CHECK(stats.avg_edit_distance == 0.0);
    CHECK(stats.avg_relative_edit_distance == 0.0);
}

TEST_CASE("corpus_stats is permutation invariant") {
    std::vector<RepairTriple> triples = {
        {"p1", "one", "a b c", "a b d"},
        {"p2", "two words", "x = 1", "x = 2"},
        {"p3", "three word problem", "foo bar", "foo baz qux"},
    };
    CorpusStats base = corpus_stats(triples);
    std::vector<RepairTriple> shuffled = {triples[2], triples[0], triples[1]};
    CorpusStats other = corpus_stats(shuffled);
    CHECK(base.problem_count == other.problem_count);
    CHECK(base.avg_edit_distance == doctest::Approx(other.avg_edit_distance));
    CHECK(base.avg_relative_edit_distance == doctest::Approx(other.avg_relative_edit_distance));
    CHECK(base.avg_problem_tokens == doctest::Approx(other.avg_problem_tokens));
    CHECK(base.avg_relative_edit_distance >= 0.0);
    CHECK(base.avg_relative_edit_distance <= 2.0);
}
