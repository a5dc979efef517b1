#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chanalyze/data_model.hpp"

namespace chanalyze {

inline constexpr std::size_t kFeatureCount = 13;

// Order matches feature_names(): w1..w5 writing style, t1..t4 temporal,
// e1..e4 external interaction. Subscriber count is deliberately absent.
using FeatureVector = std::array<double, kFeatureCount>;

const std::array<std::string, kFeatureCount>& feature_names();

// reference_time anchors the trailing 90/180/270-day activity windows.
FeatureVector extract_features(const ChannelRecord& channel,
                               const std::vector<MessageRecord>& messages,
                               std::int64_t reference_time);

// Channels whose title, description, or username contains "real",
// "official", or "verified" as a whole word, plus channels whose title is
// within edit distance 2 of a verified title. Returns sorted channel ids.
std::vector<std::int64_t> select_candidates(const Dataset& ds,
                                            const std::vector<std::string>& verified_titles);

// Feed-forward network of linear layers with ReLU hidden activations and a
// logistic output; standardization is part of the model.
class MlpModel {
 public:
    struct Layer {
        std::uint32_t in = 0, out = 0;
        std::vector<double> weights;  // out x in row-major
        std::vector<double> bias;     // out
    };

    // Pipeline architecture: 13 -> 64 -> 32 -> 16 -> 1 (4 linear layers).
    static MlpModel make_default(std::uint64_t seed);
    static MlpModel make(const std::vector<std::uint32_t>& dims, std::uint64_t seed);

    double predict_raw(const double* x) const;           // standardized input
    double predict_proba(const FeatureVector& x) const;  // raw feature input
    bool predict_label(const FeatureVector& x) const;    // fake iff p > 0.5

    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }
    const std::vector<double>& feature_mean() const { return feature_mean_; }
    const std::vector<double>& feature_sd() const { return feature_sd_; }
    void set_standardization(std::vector<double> mean, std::vector<double> sd);
    std::uint32_t input_dim() const { return layers_.front().in; }
    std::uint64_t seed() const { return seed_; }

    void save(const std::string& path) const;
    static MlpModel load(const std::string& path);

 private:
    std::vector<Layer> layers_;
    std::vector<double> feature_mean_, feature_sd_;
    std::uint64_t seed_ = 0;
};

struct TrainOptions {
    std::uint32_t epochs = 50;
    std::uint32_t batch_size = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

struct TrainResult {
    MlpModel model;
    std::vector<double> epoch_loss;  // mean BCE per epoch
};

// Adam + binary cross-entropy; standardization fitted on the training data
// (zero-variance features pinned to sd 1). label true = fake.
TrainResult train_mlp(const std::vector<FeatureVector>& features, const std::vector<bool>& labels,
                      std::uint64_t seed, const TrainOptions& opts = {});

struct FoldMetrics {
    double accuracy = 0, weighted_f1 = 0;
    std::size_t test_size = 0;
};

struct CvResult {
    double accuracy = 0;     // pooled over held-out folds
    double weighted_f1 = 0;  // support-weighted mean of per-class F1, pooled
    std::vector<FoldMetrics> folds;
};

CvResult cross_validate(const std::vector<FeatureVector>& features, const std::vector<bool>& labels,
                        std::uint32_t folds, std::uint64_t seed, const TrainOptions& opts = {},
                        unsigned threads = 1);

// Support-weighted mean of per-class F1 over binary predictions.
double weighted_f1_score(const std::vector<bool>& truth, const std::vector<bool>& predicted);

// Exact Shapley attribution of predict_proba at x by full coalition
// enumeration; features outside the coalition are read from `background`
// (default: the model's training means).
std::vector<double> exact_shapley(const MlpModel& model, const FeatureVector& x,
                                  const FeatureVector& background);
std::vector<double> exact_shapley(const MlpModel& model, const FeatureVector& x);

// Generic-width variant over an arbitrary value function; used by the
// pipeline entry points above and directly by the axiom tests.
std::vector<double> exact_shapley_fn(std::size_t n_features, const std::vector<double>& x,
                                     const std::vector<double>& background,
                                     const std::function<double(const std::vector<double>&)>& value);

// Analytic batch loss/gradients, exposed for the finite-difference checks.
// Inputs are already standardized; gradient layout mirrors model.layers().
double mlp_batch_loss(const MlpModel& model, const std::vector<std::vector<double>>& xs,
                      const std::vector<bool>& ys);
double mlp_batch_gradients(const MlpModel& model, const std::vector<std::vector<double>>& xs,
                           const std::vector<bool>& ys, std::vector<MlpModel::Layer>& grads);

}  // namespace chanalyze
