#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "chanalyze/data_model.hpp"

namespace chanalyze {

struct Corpus {
    std::vector<std::string> vocab;  // token id -> token, lowercase, >= 3 chars
    std::unordered_map<std::string, std::uint32_t> vocab_index;
    std::vector<std::uint32_t> doc_freq;             // documents containing token
    std::vector<std::vector<std::uint32_t>> docs;    // token id sequences
    std::vector<std::int64_t> doc_channel_ids;       // parallel to docs
    std::vector<std::int64_t> dropped_channels;      // empty after filtering

    std::size_t vocab_size() const { return vocab.size(); }
    std::size_t doc_count() const { return docs.size(); }
    std::size_t token_count() const;
};

const std::vector<std::string>& default_stopwords();

// One document per channel: lowercased, URLs and punctuation stripped,
// stopwords removed, tokens below min_df dropped. Channels that end up empty
// are dropped and reported. Throws if nothing survives.
Corpus build_corpus(const std::vector<std::pair<std::int64_t, std::string>>& channel_texts,
                    std::uint32_t min_df = 5,
                    const std::vector<std::string>& stopwords = default_stopwords());

// Convenience: concatenated text messages of the given channels.
Corpus preprocess_corpus(const Dataset& ds, const std::vector<std::size_t>& channel_indices,
                         std::uint32_t min_df = 5,
                         const std::vector<std::string>& stopwords = default_stopwords());

struct TopicModel {
    std::uint32_t topics = 0;           // K
    std::uint32_t vocab_size = 0;       // V
    std::uint32_t doc_count = 0;        // D
    double alpha = 0, beta = 0;
    std::uint64_t seed = 0;
    std::vector<double> phi;    // K x V row-major, rows sum to 1
    std::vector<double> theta;  // D x K row-major, rows sum to 1

    const double* phi_row(std::uint32_t k) const { return phi.data() + std::size_t(k) * vocab_size; }
    const double* theta_row(std::uint32_t d) const { return theta.data() + std::size_t(d) * topics; }
};

// Collapsed Gibbs sampler; phi/theta estimated from the final counts with
// alpha/beta smoothing. Deterministic for a fixed seed.
TopicModel lda_gibbs(const Corpus& corpus, std::uint32_t topics, double alpha, double beta,
                     std::uint32_t iters, std::uint64_t seed);

inline TopicModel lda_gibbs(const Corpus& corpus, std::uint32_t topics, std::uint64_t seed,
                            std::uint32_t iters = 500) {
    return lda_gibbs(corpus, topics, 50.0 / topics, 0.01, iters, seed);
}

// Mean over topics of sum_{i<j in top_n} log((D(w_i,w_j)+1)/D(w_j)),
// normalized by the pair count; w_j ranks above w_i. Closer to 0 = more
// coherent.
double umass_coherence(const TopicModel& model, const Corpus& corpus, std::uint32_t top_n = 10);
std::vector<double> umass_per_topic(const TopicModel& model, const Corpus& corpus,
                                    std::uint32_t top_n = 10);

struct TopicScan {
    std::uint32_t best_k = 0;
    TopicModel best_model;
    std::vector<std::pair<std::uint32_t, double>> scores;  // (K, UMass)
};

// Trains one model per K in [k_min, k_max] (seed derived per K) and keeps
// the K whose UMass score is closest to 0; ties pick the smaller K.
TopicScan select_topic_count(const Corpus& corpus, std::uint32_t k_min = 10,
                             std::uint32_t k_max = 25, std::uint64_t seed = 0,
                             std::uint32_t iters = 500, unsigned threads = 1);

struct KmeansResult {
    std::vector<std::uint32_t> assignment;  // point -> cluster
    std::vector<double> centroids;          // clusters x dim row-major
    std::uint32_t clusters = 0;
    double inertia = 0;
    std::uint32_t iterations = 0;
};

// k-means++ seeding, Lloyd iterations until centroid shift < 1e-8 or 100
// rounds; empty clusters are re-seeded from the farthest point.
KmeansResult kmeans_cluster(const std::vector<double>& points, std::size_t dim,
                            std::uint32_t clusters, std::uint64_t seed);

// Per topic, the n highest-phi words; ties resolved lexicographically.
std::vector<std::vector<std::string>> top_keywords(const TopicModel& model, const Corpus& corpus,
                                                   std::uint32_t n = 10);

}  // namespace chanalyze
