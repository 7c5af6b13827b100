#include "condor/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>

#include "condor/errors.hpp"
#include "condor/textmetrics.hpp"

namespace condor {

EncoderParams EncoderParams::zeros(std::size_t vocab_buckets, std::size_t embed_dim,
                                   std::size_t proj_dim) {
    EncoderParams p;
    p.vocab_buckets = vocab_buckets;
    p.embed_dim = embed_dim;
    p.proj_dim = proj_dim;
    p.embedding = Mat(vocab_buckets, embed_dim);
    p.projection = Mat(embed_dim, proj_dim);
    p.logit_weight.assign(embed_dim, 0.0);
    p.logit_bias = 0.0;
    return p;
}

bool EncoderParams::all_finite() const {
    auto ok = [](const std::vector<double>& v) {
        for (double x : v) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    };
    return ok(embedding.data) && ok(projection.data) && ok(logit_weight) &&
           std::isfinite(logit_bias);
}

GradientRecord GradientRecord::zeros_like(const EncoderParams& params) {
    GradientRecord g;
    g.embedding = Mat(params.vocab_buckets, params.embed_dim);
    g.projection = Mat(params.embed_dim, params.proj_dim);
    g.logit_weight.assign(params.embed_dim, 0.0);
    g.logit_bias = 0.0;
    return g;
}

std::size_t token_bucket(std::string_view token, std::size_t vocab_buckets) {
    // FNV-1a, 64-bit.
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : token) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(hash % static_cast<std::uint64_t>(vocab_buckets));
}

namespace {

// Bucket -> relative frequency of the pooled token stream
// tokenize(problem) ++ [SEP] ++ tokenize(code). Ordered so every downstream
// accumulation iterates deterministically.
std::map<std::size_t, double> bucket_frequencies(const EncoderParams& params,
                                                 std::string_view problem,
                                                 std::string_view code) {
    std::map<std::size_t, std::size_t> counts;
    std::size_t total = 0;
    auto add = [&](std::string_view token) {
        ++counts[token_bucket(token, params.vocab_buckets)];
        ++total;
    };
    for (const auto& t : tokenize(problem)) add(t);
    add(kSepToken);
    for (const auto& t : tokenize(code)) add(t);

    std::map<std::size_t, double> freq;
    for (const auto& [bucket, count] : counts) {
        freq[bucket] = static_cast<double>(count) / static_cast<double>(total);
    }
    return freq;
}

std::vector<double> pool(const EncoderParams& params,
                         const std::map<std::size_t, double>& freq) {
    std::vector<double> h(params.embed_dim, 0.0);
    for (const auto& [bucket, weight] : freq) {
        for (std::size_t e = 0; e < params.embed_dim; ++e) {
            h[e] += weight * params.embedding.at(bucket, e);
        }
    }
    return h;
}

std::vector<double> project(const EncoderParams& params, const std::vector<double>& h) {
    std::vector<double> x(params.proj_dim, 0.0);
    for (std::size_t e = 0; e < params.embed_dim; ++e) {
        for (std::size_t p = 0; p < params.proj_dim; ++p) {
            x[p] += h[e] * params.projection.at(e, p);
        }
    }
    return x;
}

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

double clamp_prob(double p) {
    if (p < kProbEpsilon) return kProbEpsilon;
    if (p > 1.0 - kProbEpsilon) return 1.0 - kProbEpsilon;
    return p;
}

double norm2(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

}  // namespace

std::vector<double> pooled_features(const EncoderParams& params, std::string_view problem,
                                    std::string_view code) {
    return pool(params, bucket_frequencies(params, problem, code));
}

std::vector<double> embed(const EncoderParams& params, std::string_view problem,
                          std::string_view code) {
    return project(params, pooled_features(params, problem, code));
}

double pair_distance(const EncoderParams& params, const EmbeddingInput& a,
                     const EmbeddingInput& b) {
    std::vector<double> xa = embed(params, a.problem, a.code);
    std::vector<double> xb = embed(params, b.problem, b.code);
    for (std::size_t i = 0; i < xa.size(); ++i) xa[i] -= xb[i];
    return norm2(xa);
}

double contrastive_loss(const EncoderParams& params, const PairBatch& batch) {
    if (batch.pairs.empty()) throw UsageError("contrastive batch is empty");
    double sum = 0.0;
    for (const auto& pair : batch.pairs) {
        double d = pair_distance(params, pair.a, pair.b);
        if (pair.label == 1) {
            sum += d * d;
        } else {
            double hinge = std::max(0.0, batch.margin - d);
            sum += hinge * hinge;
        }
    }
    return sum / static_cast<double>(batch.pairs.size());
}

GradientRecord contrastive_grad(const EncoderParams& params, const PairBatch& batch) {
    if (batch.pairs.empty()) throw UsageError("contrastive batch is empty");
    GradientRecord grad = GradientRecord::zeros_like(params);
    const double inv_n = 1.0 / static_cast<double>(batch.pairs.size());

    for (const auto& pair : batch.pairs) {
        auto freq_a = bucket_frequencies(params, pair.a.problem, pair.a.code);
        auto freq_b = bucket_frequencies(params, pair.b.problem, pair.b.code);
        std::vector<double> h_a = pool(params, freq_a);
        std::vector<double> h_b = pool(params, freq_b);
        std::vector<double> x_a = project(params, h_a);
        std::vector<double> x_b = project(params, h_b);

        std::vector<double> diff(params.proj_dim);
        for (std::size_t p = 0; p < params.proj_dim; ++p) diff[p] = x_a[p] - x_b[p];
        double d = norm2(diff);

        // dL/d(diff) for this pair, already scaled by 1/N.
        std::vector<double> g_diff(params.proj_dim, 0.0);
        if (pair.label == 1) {
            for (std::size_t p = 0; p < params.proj_dim; ++p) {
                g_diff[p] = 2.0 * diff[p] * inv_n;
            }
        } else {
            if (d >= batch.margin || d == 0.0) continue;  // inactive hinge / cusp
            double coef = -2.0 * (batch.margin - d) / d * inv_n;
            for (std::size_t p = 0; p < params.proj_dim; ++p) {
                g_diff[p] = coef * diff[p];
            }
        }

        // x = h * projection: dL/dP[e][p] = (h_a - h_b)[e] * g_diff[p],
        // dL/dh_a = P g_diff, dL/dh_b = -P g_diff.
        std::vector<double> g_h(params.embed_dim, 0.0);
        for (std::size_t e = 0; e < params.embed_dim; ++e) {
            double dh = h_a[e] - h_b[e];
            for (std::size_t p = 0; p < params.proj_dim; ++p) {
                grad.projection.at(e, p) += dh * g_diff[p];
                g_h[e] += params.projection.at(e, p) * g_diff[p];
            }
        }

        // h = sum_u freq_u * E[u]: rows touched by either side.
        for (const auto& [bucket, weight] : freq_a) {
            for (std::size_t e = 0; e < params.embed_dim; ++e) {
                grad.embedding.at(bucket, e) += weight * g_h[e];
            }
        }
        for (const auto& [bucket, weight] : freq_b) {
            for (std::size_t e = 0; e < params.embed_dim; ++e) {
                grad.embedding.at(bucket, e) -= weight * g_h[e];
            }
        }
    }
    return grad;
}

double predict_prob(const EncoderParams& params, std::string_view problem,
                    std::string_view code) {
    std::vector<double> h = pooled_features(params, problem, code);
    double z = params.logit_bias;
    for (std::size_t e = 0; e < params.embed_dim; ++e) {
        z += params.logit_weight[e] * h[e];
    }
    return clamp_prob(sigmoid(z));
}

double bce_loss(const EncoderParams& params, const std::vector<LabeledSample>& samples) {
    if (samples.empty()) throw UsageError("classification batch is empty");
    double sum = 0.0;
    for (const auto& s : samples) {
        double p = predict_prob(params, s.problem, s.code);
        sum -= s.label == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return sum / static_cast<double>(samples.size());
}

GradientRecord bce_grad(const EncoderParams& params, const std::vector<LabeledSample>& samples) {
    if (samples.empty()) throw UsageError("classification batch is empty");
    GradientRecord grad = GradientRecord::zeros_like(params);
    const double inv_k = 1.0 / static_cast<double>(samples.size());

    for (const auto& s : samples) {
        auto freq = bucket_frequencies(params, s.problem, s.code);
        std::vector<double> h = pool(params, freq);
        double z = params.logit_bias;
        for (std::size_t e = 0; e < params.embed_dim; ++e) {
            z += params.logit_weight[e] * h[e];
        }
        double coef = (clamp_prob(sigmoid(z)) - static_cast<double>(s.label)) * inv_k;

        grad.logit_bias += coef;
        for (std::size_t e = 0; e < params.embed_dim; ++e) {
            grad.logit_weight[e] += coef * h[e];
        }
        for (const auto& [bucket, weight] : freq) {
            for (std::size_t e = 0; e < params.embed_dim; ++e) {
                grad.embedding.at(bucket, e) += coef * weight * params.logit_weight[e];
            }
        }
    }
    return grad;
}

void apply_gradient(EncoderParams& params, const GradientRecord& grad, double learning_rate) {
    for (std::size_t i = 0; i < params.embedding.data.size(); ++i) {
        params.embedding.data[i] -= learning_rate * grad.embedding.data[i];
    }
    for (std::size_t i = 0; i < params.projection.data.size(); ++i) {
        params.projection.data[i] -= learning_rate * grad.projection.data[i];
    }
    for (std::size_t i = 0; i < params.logit_weight.size(); ++i) {
        params.logit_weight[i] -= learning_rate * grad.logit_weight[i];
    }
    params.logit_bias -= learning_rate * grad.logit_bias;
}

namespace {

constexpr char kMagic[4] = {'C', 'N', 'D', 'R'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes, 4);
}

void put_f64(std::ostream& out, double d) {
    std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes, 8);
}

std::uint32_t take_u32(std::istream& in, const char* field) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw DataError(std::string("checkpoint truncated while reading ") + field);
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    return v;
}

double take_f64(std::istream& in, const char* field) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw DataError(std::string("checkpoint truncated while reading ") + field);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return std::bit_cast<double>(v);
}

void take_f64_array(std::istream& in, const char* field, std::vector<double>& out) {
    for (auto& d : out) d = take_f64(in, field);
}

}  // namespace

void save_checkpoint(const EncoderParams& params, const std::string& path) {
    std::ofstream out(path + ".tmp", std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open file for writing: " + path + ".tmp");

    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(params.vocab_buckets));
    put_u32(out, static_cast<std::uint32_t>(params.embed_dim));
    put_u32(out, static_cast<std::uint32_t>(params.proj_dim));
    for (double d : params.embedding.data) put_f64(out, d);
    for (double d : params.projection.data) put_f64(out, d);
    for (double d : params.logit_weight) put_f64(out, d);
    put_f64(out, params.logit_bias);
    out.flush();
    if (!out) throw DataError("I/O failure while writing: " + path + ".tmp");
    out.close();

    std::error_code ec;
    std::filesystem::rename(path + ".tmp", path, ec);
    if (ec) throw DataError("cannot rename " + path + ".tmp to " + path + ": " + ec.message());
}

EncoderParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);

    char magic[4];
    if (!in.read(magic, 4)) throw DataError("checkpoint truncated while reading magic");
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw DataError("bad checkpoint magic, expected \"CNDR\"");
    }
    std::uint32_t version = take_u32(in, "version");
    if (version != kVersion) {
        throw DataError("unsupported checkpoint version " + std::to_string(version));
    }
    std::uint32_t vocab_buckets = take_u32(in, "vocab_buckets");
    std::uint32_t embed_dim = take_u32(in, "embed_dim");
    std::uint32_t proj_dim = take_u32(in, "proj_dim");
    if (vocab_buckets == 0) throw DataError("checkpoint header field vocab_buckets is zero");
    if (embed_dim == 0) throw DataError("checkpoint header field embed_dim is zero");
    if (proj_dim == 0) throw DataError("checkpoint header field proj_dim is zero");

    EncoderParams params = EncoderParams::zeros(vocab_buckets, embed_dim, proj_dim);
    take_f64_array(in, "embedding", params.embedding.data);
    take_f64_array(in, "projection", params.projection.data);
    take_f64_array(in, "logit_weight", params.logit_weight);
    params.logit_bias = take_f64(in, "logit_bias");

    char extra;
    if (in.read(&extra, 1)) throw DataError("checkpoint has trailing bytes after parameters");
    return params;
}

}  // namespace condor
