#include "condor/training.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "condor/errors.hpp"
#include "jsonl_io.hpp"

namespace condor {

using detail::ordered_json;

std::size_t Rng::below(std::size_t n) {
    if (n == 0) return 0;
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
}

double Rng::real(double lo, double hi) {
    // 53-bit mantissa draw in [0, 1).
    double unit = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
}

void TrainConfig::validate() const {
    if (seed == 0) throw UsageError("seed must be positive");
    if (!(margin > 0.0)) throw UsageError("margin must be positive");
    if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be positive");
    if (epochs_contrastive == 0) throw UsageError("epochs_contrastive must be positive");
    if (epochs_classifier == 0) throw UsageError("epochs_classifier must be positive");
    if (batch_size == 0) throw UsageError("batch_size must be positive");
    if (vocab_buckets == 0) throw UsageError("vocab_buckets must be positive");
    if (embed_dim == 0) throw UsageError("embed_dim must be positive");
    if (proj_dim == 0) throw UsageError("proj_dim must be positive");
}

std::string to_record_line(const DistancePoint& point) {
    ordered_json record;
    record["epoch"] = point.epoch;
    record["cc"] = point.mean_cc_distance;
    record["ec"] = point.mean_ec_distance;
    return record.dump();
}

void save_trace(const DistanceTrace& trace, const std::string& path) {
    detail::write_lines_atomic(path, [&](std::ostream& out) {
        for (const auto& p : trace) out << to_record_line(p) << '\n';
    });
}

EncoderParams init_params(const TrainConfig& config, Rng& rng) {
    EncoderParams params =
        EncoderParams::zeros(config.vocab_buckets, config.embed_dim, config.proj_dim);
    for (auto& v : params.embedding.data) v = rng.real(-0.05, 0.05);
    for (auto& v : params.projection.data) v = rng.real(-0.05, 0.05);
    for (auto& v : params.logit_weight) v = rng.real(-0.05, 0.05);
    params.logit_bias = rng.real(-0.05, 0.05);
    return params;
}

namespace {

LabeledPair to_labeled_pair(const ContrastPair& pair) {
    return LabeledPair{{pair.problem, pair.code_a}, {pair.problem, pair.code_b}, pair.label};
}

DistancePoint measure_distances(const EncoderParams& params,
                                const std::vector<ContrastPair>& pairs, std::size_t epoch) {
    double cc_sum = 0.0;
    double ec_sum = 0.0;
    std::size_t cc_count = 0;
    std::size_t ec_count = 0;
    for (const auto& pair : pairs) {
        LabeledPair lp = to_labeled_pair(pair);
        double d = pair_distance(params, lp.a, lp.b);
        if (pair.label == 1) {
            cc_sum += d;
            ++cc_count;
        } else {
            ec_sum += d;
            ++ec_count;
        }
    }
    DistancePoint point;
    point.epoch = epoch;
    point.mean_cc_distance = cc_count > 0 ? cc_sum / static_cast<double>(cc_count) : 0.0;
    point.mean_ec_distance = ec_count > 0 ? ec_sum / static_cast<double>(ec_count) : 0.0;
    return point;
}

}  // namespace

std::pair<EncoderParams, DistanceTrace> train_contrastive(
    const std::vector<ContrastPair>& pairs, const TrainConfig& config) {
    config.validate();
    if (pairs.empty()) throw UsageError("cannot train on an empty pair list");

    Rng rng(config.seed);
    EncoderParams params = init_params(config, rng);

    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    DistanceTrace trace;
    trace.reserve(config.epochs_contrastive);
    for (std::size_t epoch = 1; epoch <= config.epochs_contrastive; ++epoch) {
        rng.shuffle(order);
        for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
            std::size_t end = std::min(begin + config.batch_size, order.size());
            PairBatch batch;
            batch.margin = config.margin;
            batch.pairs.reserve(end - begin);
            for (std::size_t k = begin; k < end; ++k) {
                batch.pairs.push_back(to_labeled_pair(pairs[order[k]]));
            }
            apply_gradient(params, contrastive_grad(params, batch), config.learning_rate);
        }
        trace.push_back(measure_distances(params, pairs, epoch));
    }
    return {std::move(params), std::move(trace)};
}

EncoderParams train_classifier(const std::vector<LabeledSample>& samples,
                               const EncoderParams& init, const TrainConfig& config) {
    config.validate();
    if (samples.empty()) throw UsageError("cannot train on an empty sample list");

    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (samples[i].label == 1 ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty()) {
        std::fprintf(stderr,
                     "warning: classifier corpus contains only %s samples; "
                     "predictions will saturate\n",
                     pos.empty() ? "label-0" : "label-1");
    }

    Rng rng(config.seed);
    EncoderParams params = init;

    // Balanced sampling: batch slots alternate between the label pools, each
    // pool cycling through its own reshuffled order.
    std::size_t pos_cursor = pos.size();
    std::size_t neg_cursor = neg.size();
    auto draw = [&](std::vector<std::size_t>& pool, std::size_t& cursor) {
        if (cursor >= pool.size()) {
            rng.shuffle(pool);
            cursor = 0;
        }
        return pool[cursor++];
    };

    const std::size_t batches_per_epoch =
        (samples.size() + config.batch_size - 1) / config.batch_size;
    for (std::size_t epoch = 1; epoch <= config.epochs_classifier; ++epoch) {
        for (std::size_t b = 0; b < batches_per_epoch; ++b) {
            std::vector<LabeledSample> batch;
            std::size_t count = std::min(config.batch_size, samples.size());
            batch.reserve(count);
            for (std::size_t slot = 0; slot < count; ++slot) {
                bool want_pos = (slot % 2 == 0);
                std::size_t idx;
                if (pos.empty()) {
                    idx = draw(neg, neg_cursor);
                } else if (neg.empty()) {
                    idx = draw(pos, pos_cursor);
                } else {
                    idx = want_pos ? draw(pos, pos_cursor) : draw(neg, neg_cursor);
                }
                batch.push_back(samples[idx]);
            }
            apply_gradient(params, bce_grad(params, batch), config.learning_rate);
        }
    }
    return params;
}

namespace {

constexpr std::array<const char*, 16> kWords = {
    "add", "sub", "mul",  "loop", "sum", "val", "tmp", "arg",
    "ret", "idx", "buf",  "len",  "pos", "key", "map", "fmt"};

std::string random_text(Rng& rng, std::size_t max_words) {
    std::size_t count = 1 + rng.below(max_words);
    std::string text;
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) text.push_back(' ');
        text += kWords[rng.below(kWords.size())];
    }
    return text;
}

template <typename Fn>
void for_each_param(EncoderParams& params, Fn&& fn) {
    for (auto& v : params.embedding.data) fn(v);
    for (auto& v : params.projection.data) fn(v);
    for (auto& v : params.logit_weight) fn(v);
    fn(params.logit_bias);
}

// Collects pointers so analytic records and parameters walk in lockstep.
std::vector<double*> param_pointers(EncoderParams& params) {
    std::vector<double*> out;
    out.reserve(params.embedding.data.size() + params.projection.data.size() +
                params.logit_weight.size() + 1);
    for_each_param(params, [&](double& v) { out.push_back(&v); });
    return out;
}

std::vector<double*> grad_pointers(GradientRecord& grad) {
    std::vector<double*> out;
    for (auto& v : grad.embedding.data) out.push_back(&v);
    for (auto& v : grad.projection.data) out.push_back(&v);
    for (auto& v : grad.logit_weight) out.push_back(&v);
    out.push_back(&grad.logit_bias);
    return out;
}

double relative_deviation(double analytic, double numeric) {
    return std::abs(analytic - numeric) / (std::abs(analytic) + std::abs(numeric) + 1e-6);
}

// Central finite differences of `loss` against `analytic`, worst entry.
template <typename LossFn>
double check_against_fd(EncoderParams& params, GradientRecord analytic, LossFn&& loss) {
    constexpr double h = 1e-5;
    double worst = 0.0;
    std::vector<double*> values = param_pointers(params);
    std::vector<double*> grads = grad_pointers(analytic);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double saved = *values[i];
        *values[i] = saved + h;
        double up = loss(params);
        *values[i] = saved - h;
        double down = loss(params);
        *values[i] = saved;
        double numeric = (up - down) / (2.0 * h);
        worst = std::max(worst, relative_deviation(*grads[i], numeric));
    }
    return worst;
}

}  // namespace

double finite_diff_check(const TrainConfig& config, std::size_t trials) {
    if (trials == 0) throw UsageError("trials must be positive");
    Rng rng(config.seed);
    double worst = 0.0;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        TrainConfig small = config;
        small.vocab_buckets = 2 + rng.below(7);  // dims capped at 8
        small.embed_dim = 1 + rng.below(8);
        small.proj_dim = 1 + rng.below(8);
        EncoderParams params =
            EncoderParams::zeros(small.vocab_buckets, small.embed_dim, small.proj_dim);
        for_each_param(params, [&](double& v) { v = rng.real(-0.5, 0.5); });

        PairBatch batch;
        batch.margin = 0.5 + rng.real(0.0, 2.5);
        std::size_t pair_count = 1 + rng.below(6);
        for (std::size_t i = 0; i < pair_count; ++i) {
            LabeledPair pair;
            pair.label = static_cast<int>(rng.below(2));
            pair.a = {random_text(rng, 4), random_text(rng, 8)};
            pair.b = {random_text(rng, 4), random_text(rng, 8)};
            if (pair.label == 0) {
                // Keep hinge terms away from their kinks at d == 0 and
                // d == margin, where one-sided FD behavior is undefined.
                for (int attempt = 0; attempt < 100; ++attempt) {
                    double d = pair_distance(params, pair.a, pair.b);
                    if (d > 1e-3 && std::abs(d - batch.margin) > 1e-2) break;
                    pair.b = {random_text(rng, 4), random_text(rng, 8)};
                }
            }
            batch.pairs.push_back(std::move(pair));
        }
        worst = std::max(worst, check_against_fd(
                                    params, contrastive_grad(params, batch),
                                    [&](const EncoderParams& p) {
                                        return contrastive_loss(p, batch);
                                    }));

        std::vector<LabeledSample> samples;
        std::size_t sample_count = 1 + rng.below(6);
        for (std::size_t i = 0; i < sample_count; ++i) {
            samples.push_back({random_text(rng, 4), random_text(rng, 8),
                               static_cast<int>(rng.below(2))});
        }
        worst = std::max(worst, check_against_fd(
                                    params, bce_grad(params, samples),
                                    [&](const EncoderParams& p) {
                                        return bce_loss(p, samples);
                                    }));
    }
    return worst;
}

}  // namespace condor
