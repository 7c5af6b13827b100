// condor: mine, augment, train, and evaluate a small code-correctness
// discriminator over JSONL corpora.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jsonl_io.hpp"

#include "condor/augment.hpp"
#include "condor/corpus.hpp"
#include "condor/errors.hpp"
#include "condor/evalrank.hpp"
#include "condor/model.hpp"
#include "condor/pairing.hpp"
#include "condor/textmetrics.hpp"
#include "condor/training.hpp"

namespace {

using namespace condor;

constexpr double kGradCheckTolerance = 1e-4;

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Shared training flags plus a plain `key = value` config file (# comments).
// Precedence: flag > CONDOR_SEED > config file > default.
struct TrainFlagSet {
    std::string config_path;
    std::map<std::string, CLI::Option*> options;  // config key -> flag
    TrainConfig* config = nullptr;
    std::size_t* epochs = nullptr;
};

void add_train_flags(CLI::App* cmd, TrainFlagSet& flags, TrainConfig& config,
                     std::size_t& epochs) {
    flags.config = &config;
    flags.epochs = &epochs;
    flags.options["seed"] = cmd->add_option("--seed", config.seed, "RNG seed")
                                ->envname("CONDOR_SEED")
                                ->capture_default_str();
    flags.options["margin"] =
        cmd->add_option("--margin", config.margin, "contrastive margin m")
            ->capture_default_str();
    flags.options["learning-rate"] =
        cmd->add_option("--learning-rate", config.learning_rate, "gradient descent step size")
            ->capture_default_str();
    flags.options["epochs"] =
        cmd->add_option("--epochs", epochs, "training epochs")->capture_default_str();
    flags.options["batch-size"] =
        cmd->add_option("--batch-size", config.batch_size, "mini-batch size")
            ->capture_default_str();
    flags.options["vocab-buckets"] =
        cmd->add_option("--vocab-buckets", config.vocab_buckets, "hashed vocabulary size")
            ->capture_default_str();
    flags.options["embed-dim"] =
        cmd->add_option("--embed-dim", config.embed_dim, "embedding width")
            ->capture_default_str();
    flags.options["proj-dim"] =
        cmd->add_option("--proj-dim", config.proj_dim, "contrastive space width")
            ->capture_default_str();
    cmd->add_option("--config", flags.config_path, "key = value config file (# comments)");
}

// Applies config-file values to every training option the command line (or
// CONDOR_SEED) did not already set.
void apply_config_file(const TrainFlagSet& flags) {
    if (flags.config_path.empty()) return;
    std::ifstream in(flags.config_path);
    if (!in) throw DataError("cannot open config file: " + flags.config_path);

    TrainConfig& config = *flags.config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        std::size_t eq = text.find('=');
        auto fail = [&](const std::string& why) {
            throw UsageError(flags.config_path + ":" + std::to_string(line_no) + ": " + why);
        };
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        auto it = flags.options.find(key);
        if (it == flags.options.end()) fail("unknown key \"" + key + "\"");
        if (it->second->count() > 0) continue;  // flag or CONDOR_SEED wins

        try {
            if (key == "margin") {
                config.margin = std::stod(value);
            } else if (key == "learning-rate") {
                config.learning_rate = std::stod(value);
            } else if (key == "seed") {
                config.seed = std::stoull(value);
            } else if (key == "epochs") {
                *flags.epochs = std::stoull(value);
            } else if (key == "batch-size") {
                config.batch_size = std::stoull(value);
            } else if (key == "vocab-buckets") {
                config.vocab_buckets = std::stoull(value);
            } else if (key == "embed-dim") {
                config.embed_dim = std::stoull(value);
            } else if (key == "proj-dim") {
                config.proj_dim = std::stoull(value);
            }
        } catch (const std::exception&) {
            fail("invalid value for \"" + key + "\": " + value);
        }
    }
}

std::vector<LabeledSample> to_labeled_samples(const std::vector<CodeSample>& samples) {
    std::vector<LabeledSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        out.push_back({s.problem, s.code, s.verdict == Verdict::Correct ? 1 : 0});
    }
    return out;
}

void cmd_stats(const std::string& triples_path) {
    CorpusStats stats = corpus_stats(load_triples(triples_path));
    std::printf("%-10s %-10s %-20s %-18s %-20s %-19s %-28s\n", "problems", "samples",
                "avg_problem_tokens", "avg_buggy_tokens", "avg_correct_tokens",
                "avg_edit_distance", "avg_relative_edit_distance");
    std::printf("%-10zu %-10zu %-20.2f %-18.2f %-20.2f %-19.2f %-28.2f\n",
                stats.problem_count, stats.sample_count, stats.avg_problem_tokens,
                stats.avg_buggy_tokens, stats.avg_correct_tokens, stats.avg_edit_distance,
                stats.avg_relative_edit_distance);
}

void cmd_mine_pairs(const std::string& corpus_path, const std::string& out_path,
                    double threshold) {
    auto samples = load_corpus(corpus_path);
    auto pairs = mine_pairs(samples, threshold);
    save_pairs(pairs, out_path);
    std::size_t label1 = 0;
    for (const auto& p : pairs) label1 += p.label == 1 ? 1 : 0;
    std::printf("mined %zu pairs (%zu C-C, %zu E-C) from %zu samples\n", pairs.size(), label1,
                pairs.size() - label1, samples.size());
}

void cmd_build_triples(const std::string& corpus_path, const std::string& out_path,
                       double threshold) {
    auto samples = load_corpus(corpus_path);
    auto triples = build_triples(samples, threshold);
    save_triples(triples, out_path);
    std::printf("built %zu repair triples from %zu samples\n", triples.size(), samples.size());
}

void cmd_augment(const std::string& triples_path, const std::string& existing_path,
                 const std::string& out_path) {
    auto triples = load_triples(triples_path);
    std::vector<CodeSample> existing;
    if (!existing_path.empty()) existing = load_corpus(existing_path);
    auto fresh = augment_dataset(triples, existing);
    save_corpus(fresh, out_path);
    std::printf("generated %zu intermediate samples from %zu triples\n", fresh.size(),
                triples.size());
}

void cmd_train_contrastive(const std::string& pairs_path, const std::string& checkpoint_out,
                           const std::string& trace_out, const TrainConfig& config) {
    auto pairs = load_pairs(pairs_path);
    auto [params, trace] = train_contrastive(pairs, config);
    save_checkpoint(params, checkpoint_out);
    if (!trace_out.empty()) save_trace(trace, trace_out);
    if (!trace.empty()) {
        const auto& last = trace.back();
        std::printf("trained %zu epochs on %zu pairs; mean distance C-C %.4f, E-C %.4f\n",
                    trace.size(), pairs.size(), last.mean_cc_distance, last.mean_ec_distance);
    }
}

void cmd_train_classifier(const std::vector<std::string>& data_paths,
                          const std::string& checkpoint_in, const std::string& checkpoint_out,
                          const TrainConfig& config) {
    std::vector<LabeledSample> samples;
    for (const auto& path : data_paths) {
        auto loaded = to_labeled_samples(load_corpus(path));
        samples.insert(samples.end(), loaded.begin(), loaded.end());
    }
    EncoderParams init = load_checkpoint(checkpoint_in);
    EncoderParams params = train_classifier(samples, init, config);
    save_checkpoint(params, checkpoint_out);
    double loss = samples.empty() ? 0.0 : bce_loss(params, samples);
    std::printf("trained classifier on %zu samples; final training loss %.4f\n", samples.size(),
                loss);
}

void cmd_score(const std::string& checkpoint_path, const std::string& data_path,
               const std::string& out_path) {
    EncoderParams params = load_checkpoint(checkpoint_path);
    auto samples = load_corpus(data_path);
    std::vector<std::string> lines;
    lines.reserve(samples.size());
    for (const auto& s : samples) {
        nlohmann::ordered_json record;
        record["problem_id"] = s.problem_id;
        record["verdict"] = to_string(s.verdict);
        record["prob"] = predict_prob(params, s.problem, s.code);
        lines.push_back(record.dump());
    }
    condor::detail::write_lines_atomic(out_path, [&](std::ostream& out) {
        for (const auto& line : lines) out << line << '\n';
    });
    std::printf("scored %zu samples\n", samples.size());
}

void cmd_rank(const std::string& checkpoint_path, const std::string& candidates_path,
              const std::string& out_path) {
    EncoderParams params = load_checkpoint(checkpoint_path);
    auto sets = load_candidate_sets(candidates_path);
    auto results = rank_candidates(params, sets);
    save_rank_results(results, out_path);
    std::printf("ranked %zu candidate sets\n", sets.size());
}

void cmd_evaluate(const std::string& checkpoint_path, const std::string& candidates_path,
                  double threshold) {
    EncoderParams params = load_checkpoint(checkpoint_path);
    auto sets = load_candidate_sets(candidates_path);
    auto results = rank_candidates(params, sets);
    double p1 = pass_at_1(sets, results);

    std::vector<LabeledSample> flat;
    std::vector<int> labels;
    for (const auto& set : sets) {
        for (const auto& c : set.candidates) {
            flat.push_back({set.problem, c.code, c.label.value_or(0)});
            labels.push_back(c.label.value_or(0));
        }
    }
    std::vector<int> preds = classify(params, flat, threshold);
    ClassificationMetrics m = classification_metrics(preds, labels);

    std::printf("%-10s %-10s %-10s %-10s\n", "pass@1", "precision", "recall", "f1");
    std::printf("%-10.2f %-10.2f %-10.2f %-10.2f\n", 100.0 * p1, 100.0 * m.precision,
                100.0 * m.recall, 100.0 * m.f1);
}

void cmd_embed_dump(const std::string& checkpoint_path, const std::string& corpus_path,
                    const std::string& out_path) {
    EncoderParams params = load_checkpoint(checkpoint_path);
    if (params.proj_dim != 2) {
        throw UsageError("checkpoint has proj_dim " + std::to_string(params.proj_dim) +
                         "; embed-dump needs a 2-dimensional contrastive space "
                         "(retrain with --proj-dim 2)");
    }
    auto samples = load_corpus(corpus_path);
    std::vector<std::string> lines;
    lines.reserve(samples.size());
    for (const auto& s : samples) {
        std::vector<double> point = embed(params, s.problem, s.code);
        nlohmann::ordered_json record;
        record["problem_id"] = s.problem_id;
        record["verdict"] = to_string(s.verdict);
        record["x"] = point[0];
        record["y"] = point[1];
        lines.push_back(record.dump());
    }
    condor::detail::write_lines_atomic(out_path, [&](std::ostream& out) {
        for (const auto& line : lines) out << line << '\n';
    });
    std::printf("dumped %zu embeddings\n", samples.size());
}

int cmd_gradcheck(const TrainConfig& config, std::size_t trials) {
    double worst = finite_diff_check(config, trials);
    std::printf("max relative gradient error: %.3e over %zu trials\n", worst, trials);
    if (worst >= kGradCheckTolerance) {
        std::fprintf(stderr, "gradcheck failed: %.3e >= %.0e\n", worst, kGradCheckTolerance);
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"code-correctness discriminator pipeline"};
    app.require_subcommand(1);
    int exit_code = 0;

    // stats
    auto stats_opts = std::make_shared<std::string>();
    auto* stats = app.add_subcommand("stats", "dataset statistics for a triple file");
    stats->add_option("--triples", *stats_opts, "repair-triple JSONL file")->required();
    stats->callback([stats_opts] { cmd_stats(*stats_opts); });

    // mine-pairs
    struct MineOpts {
        std::string corpus, out;
        double threshold = kDefaultJaccardThreshold;
    };
    auto mine_opts = std::make_shared<MineOpts>();
    auto* mine = app.add_subcommand("mine-pairs", "mine labeled contrastive pairs");
    mine->add_option("--corpus", mine_opts->corpus, "corpus JSONL file")->required();
    mine->add_option("--out", mine_opts->out, "output pair JSONL file")->required();
    mine->add_option("--threshold", mine_opts->threshold, "Jaccard similarity floor")
        ->capture_default_str();
    mine->callback([mine_opts] {
        cmd_mine_pairs(mine_opts->corpus, mine_opts->out, mine_opts->threshold);
    });

    // build-triples
    auto triple_opts = std::make_shared<MineOpts>();
    auto* triples = app.add_subcommand("build-triples", "pair buggy and fixed submissions");
    triples->add_option("--corpus", triple_opts->corpus, "corpus JSONL file")->required();
    triples->add_option("--out", triple_opts->out, "output triple JSONL file")->required();
    triples->add_option("--threshold", triple_opts->threshold, "Jaccard similarity floor")
        ->capture_default_str();
    triples->callback([triple_opts] {
        cmd_build_triples(triple_opts->corpus, triple_opts->out, triple_opts->threshold);
    });

    // augment
    struct AugmentOpts {
        std::string triples, existing, out;
    };
    auto augment_opts = std::make_shared<AugmentOpts>();
    auto* augment = app.add_subcommand("augment", "generate partially-fixed intermediates");
    augment->add_option("--triples", augment_opts->triples, "repair-triple JSONL file")
        ->required();
    augment->add_option("--existing", augment_opts->existing,
                        "corpus JSONL deduplicated against");
    augment->add_option("--out", augment_opts->out, "output corpus JSONL file")->required();
    augment->callback([augment_opts] {
        cmd_augment(augment_opts->triples, augment_opts->existing, augment_opts->out);
    });

    // train-contrastive
    struct TrainContrastiveOpts {
        std::string pairs, checkpoint_out, trace_out;
        TrainConfig config;
        TrainFlagSet flags;
    };
    auto tc_opts = std::make_shared<TrainContrastiveOpts>();
    auto* tc = app.add_subcommand("train-contrastive", "contrastive phase over mined pairs");
    tc->add_option("--pairs", tc_opts->pairs, "pair JSONL file")->required();
    tc->add_option("--checkpoint-out", tc_opts->checkpoint_out, "output checkpoint")->required();
    tc->add_option("--trace-out", tc_opts->trace_out, "per-epoch distance trace JSONL");
    add_train_flags(tc, tc_opts->flags, tc_opts->config, tc_opts->config.epochs_contrastive);
    tc->callback([tc_opts] {
        apply_config_file(tc_opts->flags);
        cmd_train_contrastive(tc_opts->pairs, tc_opts->checkpoint_out, tc_opts->trace_out,
                              tc_opts->config);
    });

    // train-classifier
    struct TrainClassifierOpts {
        std::vector<std::string> data;
        std::string checkpoint_in, checkpoint_out;
        TrainConfig config;
        TrainFlagSet flags;
    };
    auto cls_opts = std::make_shared<TrainClassifierOpts>();
    auto* cls = app.add_subcommand("train-classifier", "discriminator phase over labeled samples");
    cls->add_option("--data", cls_opts->data, "corpus JSONL file(s)")
        ->required()
        ->take_all();
    cls->add_option("--checkpoint-in", cls_opts->checkpoint_in, "starting checkpoint")
        ->required();
    cls->add_option("--checkpoint-out", cls_opts->checkpoint_out, "output checkpoint")
        ->required();
    add_train_flags(cls, cls_opts->flags, cls_opts->config, cls_opts->config.epochs_classifier);
    cls->callback([cls_opts] {
        apply_config_file(cls_opts->flags);
        cmd_train_classifier(cls_opts->data, cls_opts->checkpoint_in, cls_opts->checkpoint_out,
                             cls_opts->config);
    });

    // score
    struct ScoreOpts {
        std::string checkpoint, data, out;
    };
    auto score_opts = std::make_shared<ScoreOpts>();
    auto* score = app.add_subcommand("score", "correctness probability per sample");
    score->add_option("--checkpoint", score_opts->checkpoint, "trained checkpoint")->required();
    score->add_option("--data", score_opts->data, "corpus JSONL file")->required();
    score->add_option("--out", score_opts->out, "output JSONL file")->required();
    score->callback([score_opts] {
        cmd_score(score_opts->checkpoint, score_opts->data, score_opts->out);
    });

    // rank
    struct RankOpts {
        std::string checkpoint, candidates, out;
    };
    auto rank_opts = std::make_shared<RankOpts>();
    auto* rank = app.add_subcommand("rank", "pick the most likely correct candidate per set");
    rank->add_option("--checkpoint", rank_opts->checkpoint, "trained checkpoint")->required();
    rank->add_option("--candidates", rank_opts->candidates, "candidate-set JSONL file")
        ->required();
    rank->add_option("--out", rank_opts->out, "output JSONL file")->required();
    rank->callback([rank_opts] {
        cmd_rank(rank_opts->checkpoint, rank_opts->candidates, rank_opts->out);
    });

    // evaluate
    struct EvaluateOpts {
        std::string checkpoint, candidates;
        double threshold = 0.5;
    };
    auto eval_opts = std::make_shared<EvaluateOpts>();
    auto* evaluate = app.add_subcommand("evaluate", "pass@1 and classification metrics");
    evaluate->add_option("--checkpoint", eval_opts->checkpoint, "trained checkpoint")
        ->required();
    evaluate->add_option("--candidates", eval_opts->candidates, "labeled candidate-set JSONL")
        ->required();
    evaluate->add_option("--threshold", eval_opts->threshold, "classification threshold")
        ->capture_default_str();
    evaluate->callback([eval_opts] {
        cmd_evaluate(eval_opts->checkpoint, eval_opts->candidates, eval_opts->threshold);
    });

    // embed-dump
    struct EmbedDumpOpts {
        std::string checkpoint, corpus, out;
    };
    auto dump_opts = std::make_shared<EmbedDumpOpts>();
    auto* dump = app.add_subcommand("embed-dump", "2D contrastive coordinates per sample");
    dump->add_option("--checkpoint", dump_opts->checkpoint, "trained checkpoint")->required();
    dump->add_option("--corpus", dump_opts->corpus, "corpus JSONL file")->required();
    dump->add_option("--out", dump_opts->out, "output JSONL file")->required();
    dump->callback([dump_opts] {
        cmd_embed_dump(dump_opts->checkpoint, dump_opts->corpus, dump_opts->out);
    });

    // gradcheck
    struct GradcheckOpts {
        TrainConfig config;
        std::size_t trials = 100;
    };
    auto grad_opts = std::make_shared<GradcheckOpts>();
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient self-check");
    gradcheck->add_option("--trials", grad_opts->trials, "randomized trials")
        ->capture_default_str();
    gradcheck->add_option("--seed", grad_opts->config.seed, "RNG seed")
        ->envname("CONDOR_SEED")
        ->capture_default_str();
    gradcheck->callback([grad_opts, &exit_code] {
        exit_code = cmd_gradcheck(grad_opts->config, grad_opts->trials);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return exit_code;
}
