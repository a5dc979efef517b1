#pragma once

// Independent reference implementations the fast paths are checked against.
// Everything here is deliberately brute force.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "chanalyze/clone.hpp"
#include "chanalyze/data_model.hpp"
#include "chanalyze/graph.hpp"
#include "chanalyze/util/rng.hpp"

namespace chanalyze::oracle {

// Dense reachability closure (Floyd-Warshall style).
inline std::vector<std::vector<bool>> reachability(std::size_t n,
                                                   const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (const auto& [u, v] : edges) reach[u][v] = true;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }
    return reach;
}

// SCC partition via mutual reachability; labels normalized by first node.
inline std::vector<int> scc_partition(std::size_t n,
                                      const std::vector<std::pair<int, int>>& edges) {
    const auto reach = reachability(n, edges);
    std::vector<int> label(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] != -1) continue;
        label[i] = next;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (reach[i][j] && reach[j][i]) label[j] = next;
        }
        ++next;
    }
    return label;
}

// All-pairs unweighted shortest hop counts (-1 unreachable).
inline std::vector<std::vector<int>> all_hops(std::size_t n,
                                              const std::vector<std::pair<int, int>>& edges) {
    constexpr int kInf = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& [u, v] : edges) d[u][v] = std::min(d[u][v], 1);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
            }
        }
    }
    for (auto& row : d) {
        for (int& x : row) {
            if (x >= kInf) x = -1;
        }
    }
    return d;
}

// Dense PageRank by explicit transition matrix and power iteration.
inline std::vector<double> pagerank_dense(std::size_t n,
                                          const std::vector<std::pair<int, int>>& edges,
                                          double damping = 0.85, int iters = 2000) {
    std::vector<std::set<int>> out(n);
    for (const auto& [u, v] : edges) {
        if (u != v) out[u].insert(v);
    }
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t u = 0; u < n; ++u) {
        if (out[u].empty()) {
            for (std::size_t v = 0; v < n; ++v) m[v][u] = 1.0 / static_cast<double>(n);
        } else {
            for (const int v : out[u]) m[v][u] = 1.0 / static_cast<double>(out[u].size());
        }
    }
    std::vector<double> r(n, 1.0 / static_cast<double>(n)), next(n);
    for (int it = 0; it < iters; ++it) {
        double delta = 0;
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0;
            for (std::size_t u = 0; u < n; ++u) acc += m[v][u] * r[u];
            next[v] = (1.0 - damping) / static_cast<double>(n) + damping * acc;
        }
        for (std::size_t v = 0; v < n; ++v) delta += std::abs(next[v] - r[v]);
        r = next;
        if (delta < 1e-14) break;
    }
    return r;
}

// Exhaustive pairwise clone scan; the inverted-index path must match this.
inline std::vector<CloneEntry> clone_scan_pairwise(const Dataset& ds, double threshold) {
    std::vector<std::string> langs(ds.channel_count());
    std::vector<EligibleSet> eligible(ds.channel_count());
    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        langs[i] = channel_language(ds, i);
        eligible[i] = eligible_messages(ds.messages(i));
    }
    std::vector<CloneEntry> entries;
    for (std::size_t a = 0; a < ds.channel_count(); ++a) {
        for (std::size_t b = 0; b < ds.channel_count(); ++b) {
            if (a == b || langs[a] != langs[b]) continue;
            if (eligible[b].empty()) continue;
            const CopiedRatio r = copied_ratio(eligible[a], eligible[b]);
            if (r.ratio < threshold || !r.all_later) continue;
            CloneEntry e;
            e.original_id = ds.channel(a).id;
            e.clone_id = ds.channel(b).id;
            e.shared = r.shared;
            e.eligible = eligible[b].size();
            e.ratio = r.ratio;
            entries.push_back(e);
        }
    }
    std::sort(entries.begin(), entries.end(), [](const CloneEntry& x, const CloneEntry& y) {
        return x.original_id != y.original_id ? x.original_id < y.original_id
                                              : x.clone_id < y.clone_id;
    });
    return entries;
}

// Adjusted Rand index between two partitions.
inline double adjusted_rand(const std::vector<std::uint32_t>& a,
                            const std::vector<std::uint32_t>& b) {
    const std::size_t n = a.size();
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> cont;
    std::map<std::uint32_t, double> ra, rb;
    for (std::size_t i = 0; i < n; ++i) {
        cont[{a[i], b[i]}] += 1;
        ra[a[i]] += 1;
        rb[b[i]] += 1;
    }
    const auto c2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double sum_cont = 0, sum_a = 0, sum_b = 0;
    for (const auto& [k, v] : cont) sum_cont += c2(v);
    for (const auto& [k, v] : ra) sum_a += c2(v);
    for (const auto& [k, v] : rb) sum_b += c2(v);
    const double total = c2(static_cast<double>(n));
    const double expected = sum_a * sum_b / total;
    const double max_index = (sum_a + sum_b) / 2.0;
    if (max_index == expected) return 1.0;
    return (sum_cont - expected) / (max_index - expected);
}

// Random digraph as an edge list (no self loops, no duplicates).
inline std::vector<std::pair<int, int>> random_digraph(Rng& rng, std::size_t n,
                                                       double edge_prob) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u != v && rng.bernoulli(edge_prob)) {
                edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
            }
        }
    }
    return edges;
}

// ForwardGraph from an explicit edge list with unit weights.
inline ForwardGraph graph_from_edges(std::size_t n,
                                     const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::int64_t> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(static_cast<std::int64_t>(i + 1));
    std::unordered_map<std::uint64_t, std::int64_t> weights;
    for (const auto& [u, v] : edges) {
        weights[(static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v)] += 1;
    }
    return ForwardGraph::from_edges(std::move(ids), weights);
}

}  // namespace chanalyze::oracle
