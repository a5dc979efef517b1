#include "chanalyze/topic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "chanalyze/simd/kernels.hpp"
#include "chanalyze/text/stats.hpp"
#include "chanalyze/text/utf8.hpp"
#include "chanalyze/util/rng.hpp"
#include "chanalyze/util/threading.hpp"

namespace chanalyze {

std::size_t Corpus::token_count() const {
    std::size_t n = 0;
    for (const auto& d : docs) n += d.size();
    return n;
}

const std::vector<std::string>& default_stopwords() {
    static const std::vector<std::string> kStopwords = {
        "the",   "and",   "of",    "to",    "in",   "is",    "you",  "that",  "it",    "for",
        "on",    "with",  "as",    "are",   "this", "was",   "have", "be",    "at",    "or",
        "from",  "not",   "by",    "but",   "what", "all",   "we",   "your",  "they",  "will",
        "can",   "has",   "his",   "her",   "she",  "him",   "our",  "their", "about", "which",
        "when",  "who",   "how",   "out",   "get",  "more",  "one",  "been",  "were",  "there",
        "its",   "also",  "into",  "only",  "just", "than",  "them", "some",  "over",  "very",
        "now",   "after", "before", "would", "could", "should", "did", "does", "had",  "up",
        "down",  "off",   "so",    "if",    "no",   "yes",   "do",   "my",    "me",    "us",
        "an",    "am",    "i",     "a",     "any",  "each",  "such", "these", "those", "then",
        "here",  "because", "while", "where", "why", "again", "new", "most",  "other", "being"};
    return kStopwords;
}

namespace {

// Lowercase ASCII and strip to alphanumeric runs; link tokens removed first.
std::vector<std::string> tokenize(std::string_view raw) {
    std::vector<std::string> out;
    for (const std::string_view word : text::split_words(raw)) {
        if (text::is_link_token(word)) continue;
        std::string current;
        std::size_t i = 0;
        while (i < word.size()) {
            std::uint32_t cp = utf8::next(word, i);
            if (cp >= 'A' && cp <= 'Z') cp += 0x20;
            else if (cp >= 0x410 && cp <= 0x42F) cp += 0x20;
            if (text::is_alnum_cp(cp)) {
                utf8::append(current, cp);
            } else if (!current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
        }
        if (!current.empty()) out.push_back(std::move(current));
    }
    return out;
}

}  // namespace

Corpus build_corpus(const std::vector<std::pair<std::int64_t, std::string>>& channel_texts,
                    std::uint32_t min_df, const std::vector<std::string>& stopwords) {
    const std::unordered_set<std::string> stop(stopwords.begin(), stopwords.end());

    struct RawDoc {
        std::int64_t channel_id;
        std::vector<std::string> tokens;
    };
    std::vector<RawDoc> raw;
    raw.reserve(channel_texts.size());
    std::unordered_map<std::string, std::uint32_t> df;
    for (const auto& [channel_id, blob] : channel_texts) {
        RawDoc doc{channel_id, {}};
        for (std::string& tok : tokenize(blob)) {
            if (utf8::length(tok) < 3) continue;
            if (stop.count(tok) != 0) continue;
            doc.tokens.push_back(std::move(tok));
        }
        std::unordered_set<std::string> seen(doc.tokens.begin(), doc.tokens.end());
        for (const std::string& tok : seen) ++df[tok];
        raw.push_back(std::move(doc));
    }

    // Vocabulary: df >= min_df, lexicographic ids for determinism.
    std::vector<std::string> vocab;
    for (const auto& [tok, n] : df) {
        if (n >= min_df) vocab.push_back(tok);
    }
    std::sort(vocab.begin(), vocab.end());

    Corpus corpus;
    corpus.vocab = std::move(vocab);
    corpus.vocab_index.reserve(corpus.vocab.size());
    for (std::uint32_t i = 0; i < corpus.vocab.size(); ++i) corpus.vocab_index[corpus.vocab[i]] = i;
    corpus.doc_freq.assign(corpus.vocab.size(), 0);

    for (RawDoc& doc : raw) {
        std::vector<std::uint32_t> ids;
        ids.reserve(doc.tokens.size());
        std::unordered_set<std::uint32_t> seen;
        for (const std::string& tok : doc.tokens) {
            const auto it = corpus.vocab_index.find(tok);
            if (it == corpus.vocab_index.end()) continue;
            ids.push_back(it->second);
            seen.insert(it->second);
        }
        if (ids.empty()) {
            corpus.dropped_channels.push_back(doc.channel_id);
            continue;
        }
        for (const std::uint32_t id : seen) ++corpus.doc_freq[id];
        corpus.docs.push_back(std::move(ids));
        corpus.doc_channel_ids.push_back(doc.channel_id);
    }
    if (corpus.docs.empty()) throw std::runtime_error("corpus empty after filtering");
    return corpus;
}

Corpus preprocess_corpus(const Dataset& ds, const std::vector<std::size_t>& channel_indices,
                         std::uint32_t min_df, const std::vector<std::string>& stopwords) {
    std::vector<std::pair<std::int64_t, std::string>> texts;
    texts.reserve(channel_indices.size());
    for (const std::size_t idx : channel_indices) {
        std::string blob;
        for (const MessageRecord& m : ds.messages(idx)) {
            if (!m.is_text()) continue;
            blob += m.text;
            blob += '\n';
        }
        texts.emplace_back(ds.channel(idx).id, std::move(blob));
    }
    return build_corpus(texts, min_df, stopwords);
}

TopicModel lda_gibbs(const Corpus& corpus, std::uint32_t topics, double alpha, double beta,
                     std::uint32_t iters, std::uint64_t seed) {
    const std::uint32_t K = topics;
    const auto V = static_cast<std::uint32_t>(corpus.vocab_size());
    const auto D = static_cast<std::uint32_t>(corpus.doc_count());
    if (K < 2) throw std::invalid_argument("lda_gibbs: need at least 2 topics");
    if (K > V) throw std::invalid_argument("lda_gibbs: more topics than vocabulary entries");
    if (iters < 1) throw std::invalid_argument("lda_gibbs: iters must be >= 1");
    if (D == 0) throw std::invalid_argument("lda_gibbs: empty corpus");

    // Count tables; word-topic stored V x K so each word's row is contiguous
    // for the weight kernel.
    std::vector<double> doc_topic(std::size_t(D) * K, 0.0);
    std::vector<double> word_topic(std::size_t(V) * K, 0.0);
    std::vector<double> topic_total(K, 0.0);
    std::vector<std::vector<std::uint32_t>> assignment(D);

    Rng rng(seed ^ 0x70D1C5EEDULL);
    [[maybe_unused]] const std::size_t total_tokens = corpus.token_count();

    for (std::uint32_t d = 0; d < D; ++d) {
        const auto& doc = corpus.docs[d];
        assignment[d].resize(doc.size());
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const auto z = static_cast<std::uint32_t>(rng.uniform_int(K));
            assignment[d][i] = z;
            doc_topic[std::size_t(d) * K + z] += 1.0;
            word_topic[std::size_t(doc[i]) * K + z] += 1.0;
            topic_total[z] += 1.0;
        }
    }

    std::vector<double> weights(K);
    const double v_beta = static_cast<double>(V) * beta;

    for (std::uint32_t sweep = 0; sweep < iters; ++sweep) {
        for (std::uint32_t d = 0; d < D; ++d) {
            double* nd = doc_topic.data() + std::size_t(d) * K;
            const auto& doc = corpus.docs[d];
            for (std::size_t i = 0; i < doc.size(); ++i) {
                const std::uint32_t w = doc[i];
                double* nw = word_topic.data() + std::size_t(w) * K;
                const std::uint32_t old = assignment[d][i];
                nd[old] -= 1.0;
                nw[old] -= 1.0;
                topic_total[old] -= 1.0;

                // p(k) ~ (n_dk + alpha) * (n_wk + beta) / (n_k + V*beta)
                simd::shifted_ratio_product(nw, beta, nd, alpha, topic_total.data(), v_beta,
                                            weights.data(), K);
                double total = 0.0;
                for (std::uint32_t k = 0; k < K; ++k) total += weights[k];
                const double u = rng.uniform() * total;
                double acc = 0.0;
                std::uint32_t z = K - 1;
                for (std::uint32_t k = 0; k < K; ++k) {
                    acc += weights[k];
                    if (u < acc) {
                        z = k;
                        break;
                    }
                }

                assignment[d][i] = z;
                nd[z] += 1.0;
                nw[z] += 1.0;
                topic_total[z] += 1.0;
            }
        }
#ifndef NDEBUG
        double check = 0.0;
        for (std::uint32_t k = 0; k < K; ++k) check += topic_total[k];
        assert(static_cast<std::size_t>(check + 0.5) == total_tokens &&
               "topic count tables out of sync with corpus token count");
#endif
    }

    TopicModel model;
    model.topics = K;
    model.vocab_size = V;
    model.doc_count = D;
    model.alpha = alpha;
    model.beta = beta;
    model.seed = seed;
    model.phi.assign(std::size_t(K) * V, 0.0);
    model.theta.assign(std::size_t(D) * K, 0.0);

    for (std::uint32_t k = 0; k < K; ++k) {
        const double denom = topic_total[k] + v_beta;
        double* row = model.phi.data() + std::size_t(k) * V;
        for (std::uint32_t w = 0; w < V; ++w) {
            row[w] = (word_topic[std::size_t(w) * K + k] + beta) / denom;
        }
    }
    for (std::uint32_t d = 0; d < D; ++d) {
        const double len = static_cast<double>(corpus.docs[d].size());
        const double denom = len + static_cast<double>(K) * alpha;
        double* row = model.theta.data() + std::size_t(d) * K;
        const double* nd = doc_topic.data() + std::size_t(d) * K;
        for (std::uint32_t k = 0; k < K; ++k) row[k] = (nd[k] + alpha) / denom;
    }
    return model;
}

namespace {

// Top-n word ids of a topic by phi, ties lexicographic by token.
std::vector<std::uint32_t> top_word_ids(const TopicModel& model, const Corpus& corpus,
                                        std::uint32_t k, std::uint32_t n) {
    const double* row = model.phi_row(k);
    std::vector<std::uint32_t> ids(model.vocab_size);
    std::iota(ids.begin(), ids.end(), 0u);
    const auto better = [&](std::uint32_t a, std::uint32_t b) {
        if (row[a] != row[b]) return row[a] > row[b];
        return corpus.vocab[a] < corpus.vocab[b];
    };
    const std::uint32_t take = std::min<std::uint32_t>(n, model.vocab_size);
    std::partial_sort(ids.begin(), ids.begin() + take, ids.end(), better);
    ids.resize(take);
    return ids;
}

}  // namespace

std::vector<double> umass_per_topic(const TopicModel& model, const Corpus& corpus,
                                    std::uint32_t top_n) {
    if (top_n > corpus.vocab_size()) {
        throw std::invalid_argument("umass_coherence: top_n exceeds vocabulary");
    }
    // document sets per word, computed once for the words we need
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> docs_with;
    const auto docs_of = [&](std::uint32_t w) -> const std::vector<std::uint32_t>& {
        auto it = docs_with.find(w);
        if (it != docs_with.end()) return it->second;
        std::vector<std::uint32_t> list;
        for (std::uint32_t d = 0; d < corpus.doc_count(); ++d) {
            const auto& doc = corpus.docs[d];
            if (std::find(doc.begin(), doc.end(), w) != doc.end()) list.push_back(d);
        }
        return docs_with.emplace(w, std::move(list)).first->second;
    };

    std::vector<double> scores(model.topics, 0.0);
    for (std::uint32_t k = 0; k < model.topics; ++k) {
        const std::vector<std::uint32_t> words = top_word_ids(model, corpus, k, top_n);
        const std::size_t n = words.size();
        if (n < 2) continue;
        double sum = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const auto& di = docs_of(words[i]);
            for (std::size_t j = 0; j < i; ++j) {
                const auto& dj = docs_of(words[j]);
                if (dj.empty()) {
                    throw std::logic_error("umass_coherence: top word with zero document frequency");
                }
                // |docs(w_i) ∩ docs(w_j)| over sorted lists
                std::size_t co = 0;
                auto a = di.begin();
                auto b = dj.begin();
                while (a != di.end() && b != dj.end()) {
                    if (*a < *b) ++a;
                    else if (*b < *a) ++b;
                    else {
                        ++co;
                        ++a;
                        ++b;
                    }
                }
                sum += std::log((static_cast<double>(co) + 1.0) / static_cast<double>(dj.size()));
            }
        }
        scores[k] = sum / (static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0);
    }
    return scores;
}

double umass_coherence(const TopicModel& model, const Corpus& corpus, std::uint32_t top_n) {
    const std::vector<double> scores = umass_per_topic(model, corpus, top_n);
    double total = 0.0;
    for (const double s : scores) total += s;
    return scores.empty() ? 0.0 : total / static_cast<double>(scores.size());
}

TopicScan select_topic_count(const Corpus& corpus, std::uint32_t k_min, std::uint32_t k_max,
                             std::uint64_t seed, std::uint32_t iters, unsigned threads) {
    if (k_min > k_max) throw std::invalid_argument("select_topic_count: k_min > k_max");
    const std::size_t count = k_max - k_min + 1;
    std::vector<TopicModel> models(count);
    std::vector<double> scores(count);
    parallel_for(count, threads, [&](std::size_t i) {
        const auto k = static_cast<std::uint32_t>(k_min + i);
        models[i] = lda_gibbs(corpus, k, 50.0 / k, 0.01, iters,
                              Rng::derive(seed, k).next_u64());
        scores[i] = umass_coherence(models[i], corpus);
    });

    TopicScan scan;
    std::size_t best = 0;
    for (std::size_t i = 0; i < count; ++i) {
        scan.scores.emplace_back(static_cast<std::uint32_t>(k_min + i), scores[i]);
        if (scores[i] > scores[best]) best = i;  // closest to 0; ties keep smaller K
    }
    scan.best_k = static_cast<std::uint32_t>(k_min + best);
    scan.best_model = std::move(models[best]);
    return scan;
}

KmeansResult kmeans_cluster(const std::vector<double>& points, std::size_t dim,
                            std::uint32_t clusters, std::uint64_t seed) {
    if (dim == 0) throw std::invalid_argument("kmeans: zero dimension");
    if (points.size() % dim != 0) throw std::invalid_argument("kmeans: size not multiple of dim");
    const std::size_t n = points.size() / dim;
    if (clusters < 1) throw std::invalid_argument("kmeans: need at least 1 cluster");
    if (clusters > n) throw std::invalid_argument("kmeans: more clusters than points");

    const auto point = [&](std::size_t i) { return points.data() + i * dim; };

    Rng rng(seed ^ 0x12EA75ULL);
    KmeansResult res;
    res.clusters = clusters;
    res.centroids.assign(std::size_t(clusters) * dim, 0.0);

    // k-means++ seeding
    std::vector<double> min_dist(n, 0.0);
    {
        const std::size_t first = static_cast<std::size_t>(rng.uniform_int(n));
        std::copy_n(point(first), dim, res.centroids.begin());
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = simd::squared_distance(point(i), res.centroids.data(), dim);
        }
        for (std::uint32_t c = 1; c < clusters; ++c) {
            double total = simd::sum(min_dist.data(), n);
            std::size_t chosen = 0;
            if (total > 0.0) {
                const double u = rng.uniform() * total;
                double acc = 0.0;
                chosen = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    acc += min_dist[i];
                    if (u < acc) {
                        chosen = i;
                        break;
                    }
                }
            } else {
                chosen = static_cast<std::size_t>(rng.uniform_int(n));
            }
            std::copy_n(point(chosen), dim, res.centroids.begin() + std::size_t(c) * dim);
            for (std::size_t i = 0; i < n; ++i) {
                const double d =
                    simd::squared_distance(point(i), res.centroids.data() + std::size_t(c) * dim, dim);
                min_dist[i] = std::min(min_dist[i], d);
            }
        }
    }

    res.assignment.assign(n, 0);
    std::vector<double> new_centroids(res.centroids.size());
    std::vector<std::size_t> sizes(clusters);

    for (std::uint32_t iter = 0; iter < 100; ++iter) {
        res.iterations = iter + 1;
        res.inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = simd::squared_distance(point(i), res.centroids.data(), dim);
            std::uint32_t best_c = 0;
            for (std::uint32_t c = 1; c < clusters; ++c) {
                const double d =
                    simd::squared_distance(point(i), res.centroids.data() + std::size_t(c) * dim, dim);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            res.assignment[i] = best_c;
            res.inertia += best;
        }

        std::fill(new_centroids.begin(), new_centroids.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0u);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t c = res.assignment[i];
            simd::axpy(1.0, point(i), new_centroids.data() + std::size_t(c) * dim, dim);
            ++sizes[c];
        }
        for (std::uint32_t c = 0; c < clusters; ++c) {
            if (sizes[c] == 0) {
                // re-seed from the farthest point
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = simd::squared_distance(
                        point(i), res.centroids.data() + std::size_t(res.assignment[i]) * dim, dim);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                std::copy_n(point(far), dim, new_centroids.begin() + std::size_t(c) * dim);
            } else {
                simd::scale(new_centroids.data() + std::size_t(c) * dim,
                            1.0 / static_cast<double>(sizes[c]), dim);
            }
        }

        double shift = 0.0;
        for (std::size_t i = 0; i < res.centroids.size(); ++i) {
            const double d = new_centroids[i] - res.centroids[i];
            shift += d * d;
        }
        res.centroids = new_centroids;
        if (shift < 1e-8) break;
    }

    // final assignment + inertia against the converged centroids
    res.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = simd::squared_distance(point(i), res.centroids.data(), dim);
        std::uint32_t best_c = 0;
        for (std::uint32_t c = 1; c < clusters; ++c) {
            const double d =
                simd::squared_distance(point(i), res.centroids.data() + std::size_t(c) * dim, dim);
            if (d < best) {
                best = d;
                best_c = c;
            }
        }
        res.assignment[i] = best_c;
        res.inertia += best;
    }
    return res;
}

std::vector<std::vector<std::string>> top_keywords(const TopicModel& model, const Corpus& corpus,
                                                   std::uint32_t n) {
    if (n > corpus.vocab_size()) throw std::invalid_argument("top_keywords: n exceeds vocabulary");
    std::vector<std::vector<std::string>> out(model.topics);
    for (std::uint32_t k = 0; k < model.topics; ++k) {
        for (const std::uint32_t w : top_word_ids(model, corpus, k, n)) {
            out[k].push_back(corpus.vocab[w]);
        }
    }
    return out;
}

}  // namespace chanalyze
