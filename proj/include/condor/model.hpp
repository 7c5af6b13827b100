#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace condor {

// Row-major dense matrix, just enough for the encoder.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Hashed bag-of-tokens encoder with a contrastive projection and a scalar
// logit head. The embedding table is shared by both training losses; the
// projection feeds only the contrastive space and the logit head reads the
// pooled pre-projection vector.
struct EncoderParams {
    std::size_t vocab_buckets = 0;
    std::size_t embed_dim = 0;
    std::size_t proj_dim = 0;
    Mat embedding;                     // vocab_buckets x embed_dim
    Mat projection;                    // embed_dim x proj_dim
    std::vector<double> logit_weight;  // embed_dim
    double logit_bias = 0.0;

    static EncoderParams zeros(std::size_t vocab_buckets, std::size_t embed_dim,
                               std::size_t proj_dim);
    bool all_finite() const;
};

// Shape-congruent with EncoderParams; carries one partial derivative per
// parameter.
struct GradientRecord {
    Mat embedding;
    Mat projection;
    std::vector<double> logit_weight;
    double logit_bias = 0.0;

    static GradientRecord zeros_like(const EncoderParams& params);
};

struct EmbeddingInput {
    std::string problem;
    std::string code;
};

struct LabeledPair {
    EmbeddingInput a;
    EmbeddingInput b;
    int label = 0;  // 1 same functionality, 0 different
};

struct PairBatch {
    std::vector<LabeledPair> pairs;
    double margin = 2.0;
};

struct LabeledSample {
    std::string problem;
    std::string code;
    int label = 0;  // 1 functionally correct
};

inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr double kProbEpsilon = 1e-12;

// FNV-1a 64-bit of the token bytes, reduced modulo vocab_buckets.
std::size_t token_bucket(std::string_view token, std::size_t vocab_buckets);

// Mean pool of the hashed embedding rows of tokenize(problem) ++ [SEP] ++
// tokenize(code); the pre-projection vector h of length embed_dim.
std::vector<double> pooled_features(const EncoderParams& params,
                                    std::string_view problem, std::string_view code);

// h * projection, length proj_dim; the contrastive-space point.
std::vector<double> embed(const EncoderParams& params, std::string_view problem,
                          std::string_view code);

// Euclidean distance between the two contrastive embeddings.
double pair_distance(const EncoderParams& params, const EmbeddingInput& a,
                     const EmbeddingInput& b);

// (1/N) sum over pairs of  label * d^2 + (1-label) * max(0, margin - d)^2.
double contrastive_loss(const EncoderParams& params, const PairBatch& batch);

// Exact analytic gradient of contrastive_loss. The hinge subgradient at
// d == margin and the distance subgradient at d == 0 are both taken as 0.
// logit head entries are untouched by this loss.
GradientRecord contrastive_grad(const EncoderParams& params, const PairBatch& batch);

// sigmoid(logit_weight . h + logit_bias), clamped into
// [kProbEpsilon, 1 - kProbEpsilon].
double predict_prob(const EncoderParams& params, std::string_view problem,
                    std::string_view code);

// Mean binary cross-entropy of predict_prob against the labels.
double bce_loss(const EncoderParams& params, const std::vector<LabeledSample>& samples);

// Exact analytic gradient of bce_loss; the projection receives none.
GradientRecord bce_grad(const EncoderParams& params, const std::vector<LabeledSample>& samples);

// params -= learning_rate * grad, elementwise.
void apply_gradient(EncoderParams& params, const GradientRecord& grad, double learning_rate);

// Binary checkpoint: magic "CNDR", u32 version 1, u32 vocab_buckets, u32
// embed_dim, u32 proj_dim, then embedding, projection, logit_weight,
// logit_bias as row-major little-endian IEEE-754 doubles. Round trip is
// bit-exact.
void save_checkpoint(const EncoderParams& params, const std::string& path);
EncoderParams load_checkpoint(const std::string& path);

}  // namespace condor
