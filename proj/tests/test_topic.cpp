#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chanalyze/topic.hpp"
#include "chanalyze/util/rng.hpp"
#include "test_support.hpp"

using namespace chanalyze;
using namespace chanalyze::testing;

namespace {

Corpus tiny_corpus(const std::vector<std::string>& docs, std::uint32_t min_df = 1) {
    std::vector<std::pair<std::int64_t, std::string>> texts;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        texts.emplace_back(static_cast<std::int64_t>(i + 1), docs[i]);
    }
    return build_corpus(texts, min_df, {});
}

// V-word vocabulary in three blocks; documents dominated by one block
struct Planted {
    Corpus corpus;
    std::vector<std::vector<double>> phi;  // 3 x V
};

Planted planted_corpus(std::uint64_t seed, std::size_t docs = 200, std::size_t vocab = 50,
                       std::size_t doc_len = 60) {
    Rng rng(seed);
    std::vector<std::string> words;
    for (std::size_t w = 0; w < vocab; ++w) {
        words.push_back("tok" + std::string(w < 10 ? "0" : "") + std::to_string(w));
    }
    const std::size_t block = vocab / 3;

    std::vector<std::vector<double>> phi(3, std::vector<double>(vocab, 0.0));
    for (std::size_t t = 0; t < 3; ++t) {
        const std::size_t lo = t * block;
        const std::size_t hi = t == 2 ? vocab : lo + block;
        for (std::size_t w = 0; w < vocab; ++w) {
            phi[t][w] = (w >= lo && w < hi) ? 0.96 / static_cast<double>(hi - lo)
                                            : 0.04 / static_cast<double>(vocab - (hi - lo));
        }
    }

    std::vector<std::pair<std::int64_t, std::string>> texts;
    for (std::size_t d = 0; d < docs; ++d) {
        const std::size_t dom = rng.uniform_int(3);
        std::string blob;
        for (std::size_t i = 0; i < doc_len; ++i) {
            const std::size_t topic = rng.bernoulli(0.9) ? dom : rng.uniform_int(3);
            // sample from phi[topic]
            double u = rng.uniform();
            std::size_t w = vocab - 1;
            for (std::size_t k = 0; k < vocab; ++k) {
                u -= phi[topic][k];
                if (u <= 0) {
                    w = k;
                    break;
                }
            }
            blob += words[w];
            blob += ' ';
        }
        texts.emplace_back(static_cast<std::int64_t>(d + 1), blob);
    }
    Planted out{build_corpus(texts, 1, {}), std::move(phi)};
    return out;
}

}  // namespace

TEST_CASE("preprocessing") {
    SUBCASE("url-only channel is dropped and reported") {
        const Corpus c = tiny_corpus({"https://example.com/a https://t.me/b", "alpha beta alpha"});
        CHECK(c.doc_count() == 1);
        REQUIRE(c.dropped_channels.size() == 1);
        CHECK(c.dropped_channels[0] == 1);
    }

    SUBCASE("stopwords and case folding") {
        std::vector<std::pair<std::int64_t, std::string>> texts = {{1, "The THE the apple"},
                                                                   {2, "apple pie"}};
        const Corpus c = build_corpus(texts, 1, {"the"});
        CHECK(c.vocab_index.count("the") == 0);
        CHECK(c.vocab_index.count("apple") == 1);
    }

    SUBCASE("min_df drops rare tokens; short tokens never enter") {
        std::vector<std::pair<std::int64_t, std::string>> texts;
        for (int d = 0; d < 6; ++d) {
            std::string blob = "common ab";  // "ab" too short
            if (d < 2) blob += " rare";
            texts.emplace_back(d + 1, blob);
        }
        const Corpus c = build_corpus(texts, 5, {});
        CHECK(c.vocab == std::vector<std::string>{"common"});
        CHECK(c.doc_freq[0] == 6);
    }

    SUBCASE("empty corpus throws") {
        CHECK_THROWS(tiny_corpus({"https://example.com/only"}));
    }
}

TEST_CASE("gibbs sampling separates disjoint vocabularies") {
    std::vector<std::string> docs;
    for (int i = 0; i < 10; ++i) docs.push_back("apple orchard fruit harvest apple orchard fruit");
    for (int i = 0; i < 10; ++i) docs.push_back("kernel compiler syntax runtime kernel compiler");
    const Corpus corpus = tiny_corpus(docs);
    const TopicModel model = lda_gibbs(corpus, 2, 0.1, 0.01, 200, 42);

    for (std::uint32_t d = 0; d < model.doc_count; ++d) {
        const double* theta = model.theta_row(d);
        CHECK(std::max(theta[0], theta[1]) >= 0.9);
    }

    // rows are distributions
    for (std::uint32_t k = 0; k < model.topics; ++k) {
        double s = 0;
        for (std::uint32_t w = 0; w < model.vocab_size; ++w) s += model.phi_row(k)[w];
        CHECK(std::abs(s - 1.0) <= 1e-9);
    }
    for (std::uint32_t d = 0; d < model.doc_count; ++d) {
        double s = 0;
        for (std::uint32_t k = 0; k < model.topics; ++k) s += model.theta_row(d)[k];
        CHECK(std::abs(s - 1.0) <= 1e-9);
    }
}

TEST_CASE("gibbs degenerate and error cases") {
    // K = V with single one-token documents: each phi row concentrates
    const Corpus corpus = tiny_corpus({"aaa aaa aaa", "bbb bbb bbb", "ccc ccc ccc"});
    const TopicModel model = lda_gibbs(corpus, 3, 0.01, 0.001, 300, 7);
    for (std::uint32_t k = 0; k < 3; ++k) {
        double best = 0;
        for (std::uint32_t w = 0; w < 3; ++w) best = std::max(best, model.phi_row(k)[w]);
        CHECK(best >= 0.9);
    }

    CHECK_THROWS_AS(lda_gibbs(corpus, 4, 0.1, 0.01, 10, 1), std::invalid_argument);  // K > V
    CHECK_THROWS_AS(lda_gibbs(corpus, 2, 0.1, 0.01, 0, 1), std::invalid_argument);
    CHECK(lda_gibbs(corpus, 2, 0.1, 0.01, 10, 1).theta == lda_gibbs(corpus, 2, 0.1, 0.01, 10, 1).theta);
}

TEST_CASE("planted 3-topic model is recovered") {
    const Planted planted = planted_corpus(123);
    const TopicModel model = lda_gibbs(planted.corpus, 3, 50.0 / 3.0, 0.01, 400, 9);

    // align trained topics to planted ones by best total variation over all
    // 3! permutations
    const std::size_t V = planted.corpus.vocab_size();
    const auto tv = [&](std::size_t trained, std::size_t truth) {
        double s = 0;
        for (std::size_t w = 0; w < V; ++w) {
            // vocab is sorted tokNN so ids line up with planted indices
            s += std::abs(model.phi_row(static_cast<std::uint32_t>(trained))[w] -
                          planted.phi[truth][w]);
        }
        return s / 2.0;
    };
    double best = 1e9;
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
        double worst = 0;
        for (int t = 0; t < 3; ++t) worst = std::max(worst, tv(t, p[t]));
        best = std::min(best, worst);
    }
    CHECK(best <= 0.2);
}

TEST_CASE("umass hand computation") {
    // docs: {apple banana} {apple banana} {apple cherry}
    // vocab ids sorted: apple=0 banana=1 cherry=2
    // D(apple)=3 D(banana)=2 D(cherry)=1
    // D(apple,banana)=2 D(apple,cherry)=1 D(banana,cherry)=0
    const Corpus corpus = tiny_corpus({"apple banana", "apple banana", "apple cherry"});
    REQUIRE(corpus.vocab == std::vector<std::string>{"apple", "banana", "cherry"});

    TopicModel model;
    model.topics = 1;
    model.vocab_size = 3;
    model.doc_count = 3;
    model.phi = {0.5, 0.3, 0.2};  // ranking: apple > banana > cherry

    // pairs: (banana|apple): log(3/3)=0
    //        (cherry|apple): log(2/3)
    //        (cherry|banana): log(1/2)
    // normalized by 3 pairs
    const double expected = (std::log(2.0 / 3.0) + std::log(0.5)) / 3.0;
    CHECK(std::abs(umass_coherence(model, corpus, 3) - expected) <= 1e-12);

    // two words co-occurring in every document: pair score log((D+1)/D)
    const Corpus all3 = tiny_corpus({"apple banana", "apple banana extra", "apple banana"});
    TopicModel pair_model;
    pair_model.topics = 1;
    pair_model.vocab_size = static_cast<std::uint32_t>(all3.vocab_size());
    pair_model.doc_count = 3;
    pair_model.phi.assign(all3.vocab_size(), 0.0);
    pair_model.phi[all3.vocab_index.at("apple")] = 0.6;
    pair_model.phi[all3.vocab_index.at("banana")] = 0.4;
    CHECK(std::abs(umass_coherence(pair_model, all3, 2) - std::log(4.0 / 3.0)) <= 1e-12);
}

TEST_CASE("umass is non-positive on realistic fixtures") {
    const Planted planted = planted_corpus(5, 60, 30, 40);
    for (std::uint32_t k = 2; k <= 5; ++k) {
        const TopicModel model = lda_gibbs(planted.corpus, k, 50.0 / k, 0.01, 150, k);
        CHECK(umass_coherence(model, planted.corpus) <= 0.0);
    }
}

TEST_CASE("select_topic_count") {
    const Planted planted = planted_corpus(99);

    SUBCASE("fixed k returns that k") {
        const TopicScan scan = select_topic_count(planted.corpus, 5, 5, 1, 50);
        CHECK(scan.best_k == 5);
        CHECK(scan.scores.size() == 1);
    }

    SUBCASE("score table has one row per k") {
        const TopicScan scan = select_topic_count(planted.corpus, 2, 6, 1, 60, 2);
        CHECK(scan.scores.size() == 5);
        for (std::size_t i = 0; i < scan.scores.size(); ++i) {
            CHECK(scan.scores[i].first == 2 + i);
        }
    }

    SUBCASE("planted corpus selects a small topic count") {
        std::size_t hits = 0;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const TopicScan scan = select_topic_count(planted.corpus, 2, 6, seed, 200, 2);
            if (scan.best_k >= 2 && scan.best_k <= 4) ++hits;
        }
        CHECK(hits >= 2);
    }
}

TEST_CASE("kmeans") {
    SUBCASE("points at distinct locations cluster exactly") {
        const std::vector<double> pts = {0, 0, 10, 10, -5, 3};
        const KmeansResult r = kmeans_cluster(pts, 2, 3, 1);
        CHECK(r.inertia == doctest::Approx(0.0));
        std::set<std::uint32_t> labels(r.assignment.begin(), r.assignment.end());
        CHECK(labels.size() == 3);
    }

    SUBCASE("two separated blobs are split cleanly") {
        Rng rng(8);
        std::vector<double> pts;
        for (int i = 0; i < 40; ++i) {
            pts.push_back(rng.normal(0.0, 0.3));
            pts.push_back(rng.normal(0.0, 0.3));
        }
        for (int i = 0; i < 40; ++i) {
            pts.push_back(rng.normal(10.0, 0.3));
            pts.push_back(rng.normal(10.0, 0.3));
        }
        const KmeansResult r = kmeans_cluster(pts, 2, 2, 4);
        for (int i = 1; i < 40; ++i) CHECK(r.assignment[i] == r.assignment[0]);
        for (int i = 41; i < 80; ++i) CHECK(r.assignment[i] == r.assignment[40]);
        CHECK(r.assignment[0] != r.assignment[40]);
    }

    SUBCASE("beats random assignment on random instances") {
        Rng rng(21);
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 20 + rng.uniform_int(30);
            const std::size_t dim = 2 + rng.uniform_int(4);
            const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.uniform_int(3));
            std::vector<double> pts(n * dim);
            for (double& x : pts) x = rng.uniform() * 10.0;
            const KmeansResult r = kmeans_cluster(pts, dim, k, trial);

            // inertia of a random assignment with centroids at cluster means
            std::vector<std::uint32_t> rand_assign(n);
            for (auto& a : rand_assign) a = static_cast<std::uint32_t>(rng.uniform_int(k));
            std::vector<double> centroid(k * dim, 0.0);
            std::vector<std::size_t> count(k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                ++count[rand_assign[i]];
                for (std::size_t d = 0; d < dim; ++d) {
                    centroid[rand_assign[i] * dim + d] += pts[i * dim + d];
                }
            }
            for (std::uint32_t c = 0; c < k; ++c) {
                if (count[c] == 0) continue;
                for (std::size_t d = 0; d < dim; ++d) {
                    centroid[c * dim + d] /= static_cast<double>(count[c]);
                }
            }
            double rand_inertia = 0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = pts[i * dim + d] - centroid[rand_assign[i] * dim + d];
                    rand_inertia += diff * diff;
                }
            }
            CHECK(r.inertia <= rand_inertia + 1e-9);
        }
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS(kmeans_cluster({1, 2}, 1, 0, 1), std::invalid_argument);
        CHECK_THROWS_AS(kmeans_cluster({1, 2}, 1, 3, 1), std::invalid_argument);
    }
}

TEST_CASE("top keywords") {
    const Corpus corpus = tiny_corpus({"bitcoin miner wallet", "bitcoin miner wallet"});
    REQUIRE(corpus.vocab == std::vector<std::string>{"bitcoin", "miner", "wallet"});

    TopicModel model;
    model.topics = 2;
    model.vocab_size = 3;
    model.doc_count = 2;
    model.phi = {1.0, 0.0, 0.0,               // one-hot on "bitcoin"
                 1.0 / 3, 1.0 / 3, 1.0 / 3};  // uniform: lexicographic ties

    const auto kw = top_keywords(model, corpus, 2);
    CHECK(kw[0][0] == "bitcoin");
    CHECK(kw[1] == std::vector<std::string>{"bitcoin", "miner"});
    CHECK_THROWS_AS(top_keywords(model, corpus, 9), std::invalid_argument);
}
