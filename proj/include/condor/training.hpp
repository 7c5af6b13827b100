#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "condor/model.hpp"
#include "condor/pairing.hpp"

namespace condor {

// Deterministic RNG used everywhere training needs randomness. mt19937_64 has
// a standard-specified sequence, and the derived draws below avoid the
// implementation-defined std distributions, so runs reproduce bit-for-bit
// across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }
    std::size_t below(std::size_t n);   // uniform in [0, n)
    double real(double lo, double hi);  // uniform in [lo, hi)

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

struct TrainConfig {
    std::uint64_t seed = 42;
    double margin = 2.0;
    double learning_rate = 0.05;
    std::size_t epochs_contrastive = 40;
    std::size_t epochs_classifier = 20;
    std::size_t batch_size = 32;
    std::size_t vocab_buckets = 4096;
    std::size_t embed_dim = 16;
    std::size_t proj_dim = 2;

    void validate() const;  // throws UsageError on non-positive fields
};

struct DistancePoint {
    std::size_t epoch = 0;        // 1-based
    double mean_cc_distance = 0;  // mean over all label-1 pairs
    double mean_ec_distance = 0;  // mean over all label-0 pairs
};

using DistanceTrace = std::vector<DistancePoint>;

// Trace record line: {"epoch":1,"cc":1.234,"ec":1.456}
void save_trace(const DistanceTrace& trace, const std::string& path);
std::string to_record_line(const DistancePoint& point);

// Seeded uniform [-0.05, 0.05] initialization of every parameter.
EncoderParams init_params(const TrainConfig& config, Rng& rng);

// Contrastive phase: seeded shuffle per epoch, mini-batch gradient descent on
// contrastive_loss, and a per-epoch record of the mean pair distance over the
// full label-1 and label-0 pair sets. Deterministic given (pairs, config).
std::pair<EncoderParams, DistanceTrace> train_contrastive(
    const std::vector<ContrastPair>& pairs, const TrainConfig& config);

// Classification phase: continues from init, balanced label sampling per
// batch, gradient descent on bce_loss. Warns on stderr when only one label is
// present. Deterministic given (samples, init, config).
EncoderParams train_classifier(const std::vector<LabeledSample>& samples,
                               const EncoderParams& init, const TrainConfig& config);

// Draws `trials` random small parameter sets and batches from config.seed and
// compares both analytic gradients against central finite differences
// (h = 1e-5). Returns the worst relative deviation seen.
double finite_diff_check(const TrainConfig& config, std::size_t trials);

}  // namespace condor
