#include "chanalyze/fake.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "chanalyze/simd/kernels.hpp"
#include "chanalyze/text/fingerprint.hpp"
#include "chanalyze/text/normalize.hpp"
#include "chanalyze/text/stats.hpp"
#include "chanalyze/text/utf8.hpp"
#include "chanalyze/util/rng.hpp"
#include "chanalyze/util/threading.hpp"

namespace chanalyze {

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> kNames = {
        "avg_message_length",       // w1
        "avg_emojis_per_message",   // w2
        "avg_non_alnum_per_message",  // w3
        "non_alnum_title_description",  // w4
        "non_alnum_title_fraction",     // w5
        "text_messages_90d",        // t1
        "text_messages_180d",       // t2
        "text_messages_270d",       // t3
        "mean_message_gap_seconds",  // t4
        "forwarded_messages",       // e1
        "forward_source_count_sd",  // e2
        "shared_links",             // e3
        "duplicate_messages_with_links",  // e4
    };
    return kNames;
}

FeatureVector extract_features(const ChannelRecord& channel,
                               const std::vector<MessageRecord>& messages,
                               std::int64_t reference_time) {
    FeatureVector f{};

    std::size_t text_n = 0;
    double length_sum = 0, emoji_sum = 0, non_alnum_sum = 0;
    double links = 0;
    std::size_t forwarded = 0;
    std::map<std::string, std::size_t> per_source;
    std::unordered_map<text::ContentFingerprint, std::size_t, text::FingerprintHash> fp_count;

    constexpr std::int64_t kDay = 86'400;
    const std::int64_t cut90 = reference_time - 90 * kDay;
    const std::int64_t cut180 = reference_time - 180 * kDay;
    const std::int64_t cut270 = reference_time - 270 * kDay;
    std::size_t t90 = 0, t180 = 0, t270 = 0;

    for (const MessageRecord& m : messages) {
        if (m.is_forwarded()) {
            ++forwarded;
            std::string source;
            if (m.fwd->from_channel_id) source = std::to_string(*m.fwd->from_channel_id);
            else if (m.fwd->from_name) source = "name:" + *m.fwd->from_name;
            else source = "?";
            ++per_source[source];
        }
        if (!m.is_text()) continue;
        ++text_n;
        length_sum += static_cast<double>(utf8::length(m.text));
        emoji_sum += static_cast<double>(text::count_emojis(m.text));
        non_alnum_sum += static_cast<double>(text::count_non_alnum(m.text));
        links += static_cast<double>(text::count_links(m.text));
        if (m.date > cut90 && m.date <= reference_time) ++t90;
        if (m.date > cut180 && m.date <= reference_time) ++t180;
        if (m.date > cut270 && m.date <= reference_time) ++t270;
        ++fp_count[text::fingerprint(text::normalize_text(m.text))];
    }

    if (text_n > 0) {
        f[0] = length_sum / static_cast<double>(text_n);
        f[1] = emoji_sum / static_cast<double>(text_n);
        f[2] = non_alnum_sum / static_cast<double>(text_n);
    }
    f[3] = static_cast<double>(text::count_non_alnum(channel.title) +
                               text::count_non_alnum(channel.description));
    const std::size_t title_len = utf8::length(channel.title);
    f[4] = title_len == 0
               ? 0.0
               : static_cast<double>(text::count_non_alnum(channel.title)) /
                     static_cast<double>(title_len);
    f[5] = static_cast<double>(t90);
    f[6] = static_cast<double>(t180);
    f[7] = static_cast<double>(t270);
    if (messages.size() >= 2) {
        f[8] = static_cast<double>(messages.back().date - messages.front().date) /
               static_cast<double>(messages.size() - 1);
    }
    f[9] = static_cast<double>(forwarded);
    if (per_source.size() >= 2) {
        double mean = 0;
        for (const auto& [k, n] : per_source) mean += static_cast<double>(n);
        mean /= static_cast<double>(per_source.size());
        double var = 0;
        for (const auto& [k, n] : per_source) {
            const double d = static_cast<double>(n) - mean;
            var += d * d;
        }
        f[10] = std::sqrt(var / static_cast<double>(per_source.size()));
    }
    f[11] = links;
    std::size_t dup_with_links = 0;
    for (const MessageRecord& m : messages) {
        if (!m.is_text()) continue;
        if (fp_count[text::fingerprint(text::normalize_text(m.text))] < 2) continue;
        if (text::count_links(m.text) >= 1) ++dup_with_links;
    }
    f[12] = static_cast<double>(dup_with_links);
    return f;
}

std::vector<std::int64_t> select_candidates(const Dataset& ds,
                                            const std::vector<std::string>& verified_titles) {
    static const std::array<std::string, 3> kWords = {"real", "official", "verified"};

    std::vector<std::string> folded_verified;
    folded_verified.reserve(verified_titles.size());
    for (const std::string& t : verified_titles) folded_verified.push_back(text::ascii_lower(t));

    std::vector<std::int64_t> out;
    for (const ChannelRecord& c : ds.channels()) {
        bool hit = false;
        for (const std::string& w : kWords) {
            if (text::contains_word(c.title, w) || text::contains_word(c.description, w) ||
                (c.username && text::contains_word(*c.username, w))) {
                hit = true;
                break;
            }
        }
        if (!hit) {
            const std::string folded = text::ascii_lower(c.title);
            for (const std::string& v : folded_verified) {
                if (text::levenshtein(folded, v) < 3) {
                    hit = true;
                    break;
                }
            }
        }
        if (hit) out.push_back(c.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// MLP

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

MlpModel MlpModel::make(const std::vector<std::uint32_t>& dims, std::uint64_t seed) {
    if (dims.size() < 2 || dims.back() != 1) {
        throw std::invalid_argument("mlp: need at least one layer and a single output unit");
    }
    MlpModel m;
    m.seed_ = seed;
    Rng rng(seed ^ 0x31A9E5ULL);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Layer layer;
        layer.in = dims[l];
        layer.out = dims[l + 1];
        layer.weights.resize(std::size_t(layer.in) * layer.out);
        layer.bias.assign(layer.out, 0.0);
        const double bound = std::sqrt(6.0 / static_cast<double>(layer.in));
        for (double& w : layer.weights) w = (rng.uniform() * 2.0 - 1.0) * bound;
        m.layers_.push_back(std::move(layer));
    }
    return m;
}

MlpModel MlpModel::make_default(std::uint64_t seed) { return make({13, 64, 32, 16, 1}, seed); }

void MlpModel::set_standardization(std::vector<double> mean, std::vector<double> sd) {
    feature_mean_ = std::move(mean);
    feature_sd_ = std::move(sd);
}

double MlpModel::predict_raw(const double* x) const {
    std::vector<double> act(x, x + layers_.front().in);
    std::vector<double> z;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& layer = layers_[l];
        z.assign(layer.out, 0.0);
        simd::matvec(layer.weights.data(), layer.out, layer.in, act.data(), z.data());
        if (l + 1 < layers_.size()) {
            act.resize(layer.out);
            simd::add_bias_relu(z.data(), layer.bias.data(), act.data(), layer.out);
        } else {
            act.assign(1, z[0] + layer.bias[0]);
        }
    }
    return sigmoid(act[0]);
}

double MlpModel::predict_proba(const FeatureVector& x) const {
    if (layers_.front().in != kFeatureCount) {
        throw std::invalid_argument("mlp: model input width does not match the feature vector");
    }
    std::vector<double> std_x(kFeatureCount);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (!std::isfinite(x[i])) throw std::invalid_argument("mlp: non-finite feature");
        if (feature_mean_.empty()) {
            std_x[i] = x[i];
        } else {
            std_x[i] = (x[i] - feature_mean_[i]) / feature_sd_[i];
        }
    }
    return predict_raw(std_x.data());
}

bool MlpModel::predict_label(const FeatureVector& x) const { return predict_proba(x) > 0.5; }

double mlp_batch_gradients(const MlpModel& model, const std::vector<std::vector<double>>& xs,
                           const std::vector<bool>& ys, std::vector<MlpModel::Layer>& grads) {
    const auto& layers = model.layers();
    grads.resize(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        grads[l].in = layers[l].in;
        grads[l].out = layers[l].out;
        grads[l].weights.assign(layers[l].weights.size(), 0.0);
        grads[l].bias.assign(layers[l].bias.size(), 0.0);
    }

    const double inv_n = 1.0 / static_cast<double>(xs.size());
    double loss = 0.0;

    std::vector<std::vector<double>> acts(layers.size() + 1);
    std::vector<std::vector<double>> zs(layers.size());
    std::vector<double> delta, next_delta;

    for (std::size_t s = 0; s < xs.size(); ++s) {
        acts[0] = xs[s];
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto& layer = layers[l];
            zs[l].assign(layer.out, 0.0);
            simd::matvec(layer.weights.data(), layer.out, layer.in, acts[l].data(), zs[l].data());
            for (std::uint32_t o = 0; o < layer.out; ++o) zs[l][o] += layer.bias[o];
            acts[l + 1].resize(layer.out);
            if (l + 1 < layers.size()) {
                for (std::uint32_t o = 0; o < layer.out; ++o) {
                    acts[l + 1][o] = zs[l][o] > 0.0 ? zs[l][o] : 0.0;
                }
            } else {
                acts[l + 1][0] = zs[l][0];
            }
        }

        const double y = ys[s] ? 1.0 : 0.0;
        const double p = sigmoid(acts.back()[0]);
        // clamped log for numerical safety at saturated outputs
        const double eps = 1e-12;
        loss -= inv_n * (y * std::log(std::max(p, eps)) +
                         (1.0 - y) * std::log(std::max(1.0 - p, eps)));

        delta.assign(1, (p - y) * inv_n);
        for (std::size_t l = layers.size(); l-- > 0;) {
            const auto& layer = layers[l];
            auto& g = grads[l];
            for (std::uint32_t o = 0; o < layer.out; ++o) {
                simd::axpy(delta[o], acts[l].data(), g.weights.data() + std::size_t(o) * layer.in,
                           layer.in);
                g.bias[o] += delta[o];
            }
            if (l == 0) break;
            next_delta.assign(layer.in, 0.0);
            for (std::uint32_t o = 0; o < layer.out; ++o) {
                simd::axpy(delta[o], layer.weights.data() + std::size_t(o) * layer.in,
                           next_delta.data(), layer.in);
            }
            for (std::uint32_t i = 0; i < layer.in; ++i) {
                if (zs[l - 1][i] <= 0.0) next_delta[i] = 0.0;  // ReLU gate
            }
            delta.swap(next_delta);
        }
    }
    return loss;
}

double mlp_batch_loss(const MlpModel& model, const std::vector<std::vector<double>>& xs,
                      const std::vector<bool>& ys) {
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(xs.size());
    for (std::size_t s = 0; s < xs.size(); ++s) {
        const double p = model.predict_raw(xs[s].data());
        const double y = ys[s] ? 1.0 : 0.0;
        const double eps = 1e-12;
        loss -= inv_n * (y * std::log(std::max(p, eps)) +
                         (1.0 - y) * std::log(std::max(1.0 - p, eps)));
    }
    return loss;
}

TrainResult train_mlp(const std::vector<FeatureVector>& features, const std::vector<bool>& labels,
                      std::uint64_t seed, const TrainOptions& opts) {
    if (features.size() != labels.size()) throw std::invalid_argument("train_mlp: size mismatch");
    std::size_t pos = 0;
    for (const bool y : labels) pos += y ? 1 : 0;
    if (pos < 2 || labels.size() - pos < 2) {
        throw std::invalid_argument("train_mlp: need at least 2 samples of each class");
    }

    // standardization from the training data only
    std::vector<double> mean(kFeatureCount, 0.0), sd(kFeatureCount, 0.0);
    for (const FeatureVector& f : features) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) mean[i] += f[i];
    }
    for (double& m : mean) m /= static_cast<double>(features.size());
    for (const FeatureVector& f : features) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            const double d = f[i] - mean[i];
            sd[i] += d * d;
        }
    }
    for (double& s : sd) {
        s = std::sqrt(s / static_cast<double>(features.size()));
        if (s == 0.0) s = 1.0;  // constant feature
    }

    std::vector<std::vector<double>> xs(features.size(), std::vector<double>(kFeatureCount));
    for (std::size_t s = 0; s < features.size(); ++s) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            xs[s][i] = (features[s][i] - mean[i]) / sd[i];
        }
    }

    TrainResult result;
    result.model = MlpModel::make_default(seed);
    result.model.set_standardization(mean, sd);
    auto& layers = result.model.layers();

    // Adam state
    std::vector<MlpModel::Layer> m_state(layers.size()), v_state(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        m_state[l].weights.assign(layers[l].weights.size(), 0.0);
        m_state[l].bias.assign(layers[l].bias.size(), 0.0);
        v_state[l].weights.assign(layers[l].weights.size(), 0.0);
        v_state[l].bias.assign(layers[l].bias.size(), 0.0);
    }

    Rng rng(seed ^ 0xADA31415ULL);
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0u);

    std::vector<MlpModel::Layer> grads;
    std::uint64_t step = 0;

    for (std::uint32_t epoch = 0; epoch < opts.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
            const std::size_t end = std::min(order.size(), start + opts.batch_size);
            std::vector<std::vector<double>> bx;
            std::vector<bool> by;
            bx.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                bx.push_back(xs[order[i]]);
                by.push_back(labels[order[i]]);
            }
            const double loss = mlp_batch_gradients(result.model, bx, by, grads);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("train_mlp: non-finite loss at epoch " +
                                         std::to_string(epoch));
            }
            epoch_loss += loss * static_cast<double>(bx.size());
            ++batches;
            ++step;

            const double bc1 = 1.0 - std::pow(opts.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(opts.beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < layers.size(); ++l) {
                const auto update = [&](std::vector<double>& w, std::vector<double>& mm,
                                        std::vector<double>& vv, const std::vector<double>& g) {
                    for (std::size_t i = 0; i < w.size(); ++i) {
                        mm[i] = opts.beta1 * mm[i] + (1.0 - opts.beta1) * g[i];
                        vv[i] = opts.beta2 * vv[i] + (1.0 - opts.beta2) * g[i] * g[i];
                        const double mhat = mm[i] / bc1;
                        const double vhat = vv[i] / bc2;
                        w[i] -= opts.learning_rate * mhat / (std::sqrt(vhat) + opts.eps);
                    }
                };
                update(layers[l].weights, m_state[l].weights, v_state[l].weights,
                       grads[l].weights);
                update(layers[l].bias, m_state[l].bias, v_state[l].bias, grads[l].bias);
            }
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(xs.size()));
    }
    return result;
}

double weighted_f1_score(const std::vector<bool>& truth, const std::vector<bool>& predicted) {
    if (truth.size() != predicted.size() || truth.empty()) {
        throw std::invalid_argument("weighted_f1_score: size mismatch");
    }
    double f1_sum = 0.0;
    for (const bool cls : {false, true}) {
        std::size_t tp = 0, fp = 0, fn = 0, support = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool t = truth[i] == cls;
            const bool p = predicted[i] == cls;
            if (t) ++support;
            if (t && p) ++tp;
            if (!t && p) ++fp;
            if (t && !p) ++fn;
        }
        const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
        const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
        const double f1 =
            precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        f1_sum += f1 * static_cast<double>(support) / static_cast<double>(truth.size());
    }
    return f1_sum;
}

CvResult cross_validate(const std::vector<FeatureVector>& features, const std::vector<bool>& labels,
                        std::uint32_t folds, std::uint64_t seed, const TrainOptions& opts,
                        unsigned threads) {
    if (folds < 2) throw std::invalid_argument("cross_validate: need at least 2 folds");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
    if (pos.size() < folds || neg.size() < folds) {
        throw std::invalid_argument("cross_validate: class too small for stratification");
    }

    Rng rng(seed ^ 0xCF01DULL);
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::vector<std::uint32_t> fold_of(labels.size());
    for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = static_cast<std::uint32_t>(i % folds);
    for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = static_cast<std::uint32_t>(i % folds);

    struct FoldOutcome {
        std::vector<bool> truth, pred;
        FoldMetrics metrics;
    };
    std::vector<FoldOutcome> outcomes(folds);

    parallel_for(folds, threads, [&](std::size_t f) {
        std::vector<FeatureVector> train_x;
        std::vector<bool> train_y;
        std::vector<std::size_t> test_idx;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (fold_of[i] == f) {
                test_idx.push_back(i);
            } else {
                train_x.push_back(features[i]);
                train_y.push_back(labels[i]);
            }
        }
        const TrainResult tr = train_mlp(train_x, train_y, Rng::derive(seed, f).next_u64(), opts);
        FoldOutcome& out = outcomes[f];
        for (const std::size_t i : test_idx) {
            out.truth.push_back(labels[i]);
            out.pred.push_back(tr.model.predict_label(features[i]));
        }
        std::size_t correct = 0;
        for (std::size_t i = 0; i < out.truth.size(); ++i) {
            if (out.truth[i] == out.pred[i]) ++correct;
        }
        out.metrics.test_size = out.truth.size();
        out.metrics.accuracy = static_cast<double>(correct) / static_cast<double>(out.truth.size());
        out.metrics.weighted_f1 = weighted_f1_score(out.truth, out.pred);
    });

    CvResult cv;
    std::vector<bool> all_truth, all_pred;
    for (const FoldOutcome& out : outcomes) {
        cv.folds.push_back(out.metrics);
        all_truth.insert(all_truth.end(), out.truth.begin(), out.truth.end());
        all_pred.insert(all_pred.end(), out.pred.begin(), out.pred.end());
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < all_truth.size(); ++i) {
        if (all_truth[i] == all_pred[i]) ++correct;
    }
    cv.accuracy = static_cast<double>(correct) / static_cast<double>(all_truth.size());
    cv.weighted_f1 = weighted_f1_score(all_truth, all_pred);
    return cv;
}

// ---------------------------------------------------------------------------
// Shapley

std::vector<double> exact_shapley_fn(
    std::size_t n, const std::vector<double>& x, const std::vector<double>& background,
    const std::function<double(const std::vector<double>&)>& value) {
    if (n > 24) throw std::invalid_argument("exact_shapley: too many features to enumerate");
    const std::size_t masks = std::size_t(1) << n;

    std::vector<double> v(masks);
    std::vector<double> blend(n);
    for (std::size_t mask = 0; mask < masks; ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            blend[i] = (mask >> i) & 1 ? x[i] : background[i];
        }
        v[mask] = value(blend);
    }

    // weight(s) = s! (n-1-s)! / n!
    std::vector<double> factorial(n + 1, 1.0);
    for (std::size_t i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);
    std::vector<double> weight(n);
    for (std::size_t s = 0; s < n; ++s) {
        weight[s] = factorial[s] * factorial[n - 1 - s] / factorial[n];
    }

    std::vector<double> phi(n, 0.0);
    for (std::size_t mask = 0; mask < masks; ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1) continue;
            phi[i] += weight[size] * (v[mask | (std::size_t(1) << i)] - v[mask]);
        }
    }
    return phi;
}

std::vector<double> exact_shapley(const MlpModel& model, const FeatureVector& x,
                                  const FeatureVector& background) {
    const std::vector<double> xv(x.begin(), x.end());
    const std::vector<double> bv(background.begin(), background.end());
    return exact_shapley_fn(kFeatureCount, xv, bv, [&](const std::vector<double>& blend) {
        FeatureVector f;
        std::copy(blend.begin(), blend.end(), f.begin());
        return model.predict_proba(f);
    });
}

std::vector<double> exact_shapley(const MlpModel& model, const FeatureVector& x) {
    FeatureVector background{};
    if (!model.feature_mean().empty()) {
        std::copy(model.feature_mean().begin(), model.feature_mean().end(), background.begin());
    }
    return exact_shapley(model, x, background);
}

// ---------------------------------------------------------------------------
// Serialization (little-endian, versioned)

namespace {

constexpr char kMagic[8] = {'C', 'H', 'M', 'L', 'P', '0', '0', '1'};

void write_u64(std::ostream& os, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(buf, 8);
}

void write_u32(std::ostream& os, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(buf, 4);
}

void write_f64(std::ostream& os, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    write_u64(os, bits);
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

double read_f64(std::istream& is) {
    const std::uint64_t bits = read_u64(is);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

}  // namespace

void MlpModel::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write model file " + path);
    os.write(kMagic, sizeof(kMagic));
    write_u32(os, static_cast<std::uint32_t>(layers_.size()));
    for (const Layer& l : layers_) {
        write_u32(os, l.in);
        write_u32(os, l.out);
    }
    for (const Layer& l : layers_) {
        for (const double w : l.weights) write_f64(os, w);
        for (const double b : l.bias) write_f64(os, b);
    }
    write_u32(os, static_cast<std::uint32_t>(feature_mean_.size()));
    for (const double m : feature_mean_) write_f64(os, m);
    for (const double s : feature_sd_) write_f64(os, s);
    write_u64(os, seed_);
    if (!os) throw std::runtime_error("failed writing model file " + path);
}

MlpModel MlpModel::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open model file " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) {
        throw std::runtime_error("not a model file (bad magic): " + path);
    }
    MlpModel m;
    const std::uint32_t n_layers = read_u32(is);
    if (n_layers == 0 || n_layers > 64) throw std::runtime_error("corrupt model file: " + path);
    m.layers_.resize(n_layers);
    for (Layer& l : m.layers_) {
        l.in = read_u32(is);
        l.out = read_u32(is);
        if (l.in == 0 || l.out == 0 || std::size_t(l.in) * l.out > (1u << 26)) {
            throw std::runtime_error("corrupt model file: " + path);
        }
    }
    for (Layer& l : m.layers_) {
        l.weights.resize(std::size_t(l.in) * l.out);
        l.bias.resize(l.out);
        for (double& w : l.weights) w = read_f64(is);
        for (double& b : l.bias) b = read_f64(is);
    }
    const std::uint32_t std_dim = read_u32(is);
    m.feature_mean_.resize(std_dim);
    m.feature_sd_.resize(std_dim);
    for (double& v : m.feature_mean_) v = read_f64(is);
    for (double& v : m.feature_sd_) v = read_f64(is);
    m.seed_ = read_u64(is);
    if (!is) throw std::runtime_error("truncated model file: " + path);
    return m;
}

}  // namespace chanalyze
