#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#ifndef CONDOR_CLI_PATH
#define CONDOR_CLI_PATH "./condor"
#endif
#ifndef CONDOR_FIXTURES_DIR
#define CONDOR_FIXTURES_DIR "./fixtures"
#endif

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(CONDOR_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    std::array<char, 512> buffer;
    while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
        result.output += buffer.data();
    }
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace

TEST_CASE("cli rejects missing and unknown arguments with exit 1") {
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("no-such-command").exit_code == 1);
    CHECK(run_cli("stats --no-such-flag x").exit_code == 1);
    CHECK(run_cli("stats").exit_code == 1);  // --triples is required
}

TEST_CASE("cli maps data errors to exit 2") {
    CHECK(run_cli("stats --triples /nonexistent/nope.jsonl").exit_code == 2);
    CHECK(run_cli("rank --checkpoint /nonexistent/ckpt --candidates /nonexistent/c --out /tmp/condor_cli_rank_out.jsonl")
              .exit_code == 2);
}

TEST_CASE("cli stats prints the seven dataset columns") {
    CliResult result =
        run_cli("stats --triples " + std::string(CONDOR_FIXTURES_DIR) + "/triples_mini.jsonl");
    REQUIRE(result.exit_code == 0);
    for (const char* column :
         {"problems", "samples", "avg_problem_tokens", "avg_buggy_tokens",
          "avg_correct_tokens", "avg_edit_distance", "avg_relative_edit_distance"}) {
        CHECK(result.output.find(column) != std::string::npos);
    }
    // hand-verified values for the bundled 3-triple fixture
    CHECK(result.output.find("1.00") != std::string::npos);  // avg edit distance
    CHECK(result.output.find("0.18") != std::string::npos);  // avg RED
}

TEST_CASE("cli gradcheck reports the max relative error") {
    CliResult result = run_cli("gradcheck --trials 5 --seed 11");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("max relative gradient error") != std::string::npos);
}

TEST_CASE("cli help exits 0") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("stats --help").exit_code == 0);
}

TEST_CASE("cli pipeline runs end to end and is idempotent") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "condor_cli_pipeline";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string corpus = std::string(CONDOR_FIXTURES_DIR) + "/corpus_small.jsonl";
    auto in_dir = [&](const std::string& name) { return (dir / name).string(); };
    auto read_file = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };

    // mine pairs twice: identical bytes
    CHECK(run_cli("mine-pairs --corpus " + corpus + " --out " + in_dir("pairs.jsonl"))
              .exit_code == 0);
    CHECK(run_cli("mine-pairs --corpus " + corpus + " --out " + in_dir("pairs2.jsonl"))
              .exit_code == 0);
    std::string pairs_bytes = read_file(in_dir("pairs.jsonl"));
    CHECK(!pairs_bytes.empty());
    CHECK(pairs_bytes == read_file(in_dir("pairs2.jsonl")));

    // triples and augmentation
    CHECK(run_cli("build-triples --corpus " + corpus + " --out " + in_dir("triples.jsonl"))
              .exit_code == 0);
    CHECK(run_cli("augment --triples " + in_dir("triples.jsonl") + " --existing " + corpus +
                  " --out " + in_dir("augmented.jsonl"))
              .exit_code == 0);

    // contrastive training: flags override CONDOR_SEED, identical seeds give
    // identical checkpoints and traces
    std::string train_flags = " --epochs 3 --vocab-buckets 256 --embed-dim 8 --batch-size 4";
    CHECK(run_cli("train-contrastive --pairs " + in_dir("pairs.jsonl") + " --checkpoint-out " +
                  in_dir("c1.ckpt") + " --trace-out " + in_dir("t1.jsonl") + " --seed 55" +
                  train_flags)
              .exit_code == 0);
    setenv("CONDOR_SEED", "99", 1);
    CHECK(run_cli("train-contrastive --pairs " + in_dir("pairs.jsonl") + " --checkpoint-out " +
                  in_dir("c2.ckpt") + " --trace-out " + in_dir("t2.jsonl") + " --seed 55" +
                  train_flags)
              .exit_code == 0);
    CHECK(run_cli("train-contrastive --pairs " + in_dir("pairs.jsonl") + " --checkpoint-out " +
                  in_dir("c3.ckpt") + " --trace-out " + in_dir("t3.jsonl") + train_flags)
              .exit_code == 0);
    unsetenv("CONDOR_SEED");
    CHECK(read_file(in_dir("c1.ckpt")) == read_file(in_dir("c2.ckpt")));  // flag wins over env
    CHECK(read_file(in_dir("t1.jsonl")) == read_file(in_dir("t2.jsonl")));
    CHECK(read_file(in_dir("c1.ckpt")) != read_file(in_dir("c3.ckpt")));  // env seed applied

    // config file supplies defaults, flags still win
    {
        std::ofstream config(dir / "train.conf");
        config << "# pipeline test config\nseed = 55\nepochs = 3\nvocab-buckets = 256\n"
               << "embed-dim = 8\nbatch-size = 4\n";
    }
    CHECK(run_cli("train-contrastive --pairs " + in_dir("pairs.jsonl") + " --checkpoint-out " +
                  in_dir("c4.ckpt") + " --config " + in_dir("train.conf"))
              .exit_code == 0);
    CHECK(read_file(in_dir("c1.ckpt")) == read_file(in_dir("c4.ckpt")));

    // classifier phase over real plus augmented data
    CHECK(run_cli("train-classifier --data " + corpus + " --data " + in_dir("augmented.jsonl") +
                  " --checkpoint-in " + in_dir("c1.ckpt") + " --checkpoint-out " +
                  in_dir("cls.ckpt") + " --seed 55 --epochs 2 --vocab-buckets 256 --embed-dim 8")
              .exit_code == 0);

    // scoring, ranking, evaluation, embedding dump
    CHECK(run_cli("score --checkpoint " + in_dir("cls.ckpt") + " --data " + corpus + " --out " +
                  in_dir("scores.jsonl"))
              .exit_code == 0);
    {
        std::ofstream cands(dir / "cands.jsonl");
        cands << R"({"problem_id":"p1","problem":"sum","candidates":[)"
              << R"({"code":"alpha beta gamma delta eps","label":1},)"
              << R"({"code":"alpha beta gamma delta fault","label":0}]})" << "\n";
    }
    CHECK(run_cli("rank --checkpoint " + in_dir("cls.ckpt") + " --candidates " +
                  in_dir("cands.jsonl") + " --out " + in_dir("ranks.jsonl"))
              .exit_code == 0);
    CHECK(read_file(in_dir("ranks.jsonl")).find("\"selected\"") != std::string::npos);

    CliResult eval = run_cli("evaluate --checkpoint " + in_dir("cls.ckpt") + " --candidates " +
                             in_dir("cands.jsonl"));
    CHECK(eval.exit_code == 0);
    CHECK(eval.output.find("pass@1") != std::string::npos);
    CHECK(eval.output.find("precision") != std::string::npos);
    CHECK(eval.output.find("recall") != std::string::npos);
    CHECK(eval.output.find("f1") != std::string::npos);

    CHECK(run_cli("embed-dump --checkpoint " + in_dir("cls.ckpt") + " --corpus " + corpus +
                  " --out " + in_dir("points.jsonl"))
              .exit_code == 0);
    std::string points = read_file(in_dir("points.jsonl"));
    CHECK(points.find("\"x\"") != std::string::npos);
    CHECK(points.find("\"y\"") != std::string::npos);
    // one coordinate line per corpus sample
    CHECK(std::count(points.begin(), points.end(), '\n') == 8);

    // a 3-dimensional checkpoint cannot be dumped as 2D scatter data
    CHECK(run_cli("train-contrastive --pairs " + in_dir("pairs.jsonl") + " --checkpoint-out " +
                  in_dir("c3d.ckpt") + " --seed 5 --epochs 1 --proj-dim 3 --vocab-buckets 64" +
                  " --embed-dim 4")
              .exit_code == 0);
    CHECK(run_cli("embed-dump --checkpoint " + in_dir("c3d.ckpt") + " --corpus " + corpus +
                  " --out " + in_dir("nope.jsonl"))
              .exit_code == 1);

    fs::remove_all(dir);
}
