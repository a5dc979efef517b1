#include "chanalyze/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "chanalyze/simd/kernels.hpp"
#include "chanalyze/util/threading.hpp"

namespace chanalyze {

ForwardGraph ForwardGraph::from_edges(
    std::vector<std::int64_t> node_ids,
    const std::unordered_map<std::uint64_t, std::int64_t>& weights) {
    ForwardGraph g;
    g.node_ids_ = std::move(node_ids);
    g.index_.reserve(g.node_ids_.size());
    for (std::size_t i = 0; i < g.node_ids_.size(); ++i) {
        g.index_[g.node_ids_[i]] = static_cast<std::uint32_t>(i);
    }
    g.out_.resize(g.node_ids_.size());
    g.in_.resize(g.node_ids_.size());
    for (const auto& [key, w] : weights) {
        const auto u = static_cast<std::uint32_t>(key >> 32);
        const auto v = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        g.out_[u].push_back({v, w});
        g.in_[v].push_back({u, w});
        ++g.edge_count_;
        g.total_weight_ += w;
    }
    const auto by_target = [](const Edge& a, const Edge& b) { return a.to < b.to; };
    for (auto& adj : g.out_) std::sort(adj.begin(), adj.end(), by_target);
    for (auto& adj : g.in_) std::sort(adj.begin(), adj.end(), by_target);
    return g;
}

GraphBuildResult build_forward_graph(const Dataset& ds) {
    std::vector<std::int64_t> ids;
    ids.reserve(ds.channel_count());
    for (const ChannelRecord& c : ds.channels()) ids.push_back(c.id);

    std::unordered_map<std::int64_t, std::uint32_t> index;
    index.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<std::uint32_t>(i);

    GraphBuildResult result;
    std::unordered_map<std::uint64_t, std::int64_t> weights;
    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        const auto u = static_cast<std::uint32_t>(i);
        for (const MessageRecord& m : ds.messages(i)) {
            if (!m.fwd) continue;
            if (!m.fwd->from_channel_id) {
                ++result.external_origin_forwards;
                continue;
            }
            const std::int64_t origin = *m.fwd->from_channel_id;
            if (origin == ds.channel(i).id) {
                ++result.self_forwards;
                continue;
            }
            const auto it = index.find(origin);
            if (it == index.end()) {
                ++result.external_origin_forwards;
                continue;
            }
            weights[(static_cast<std::uint64_t>(u) << 32) | it->second] += 1;
        }
    }
    result.graph = ForwardGraph::from_edges(std::move(ids), weights);
    return result;
}

ForwardGraph ForwardGraph::restricted_to(const std::vector<std::int64_t>& channel_ids) const {
    std::vector<std::int64_t> kept;
    kept.reserve(channel_ids.size());
    std::unordered_set<std::int64_t> seen;
    for (const std::int64_t id : channel_ids) {
        if (index_.count(id) != 0 && seen.insert(id).second) kept.push_back(id);
    }
    std::sort(kept.begin(), kept.end());

    std::unordered_map<std::int64_t, std::uint32_t> new_index;
    for (std::size_t i = 0; i < kept.size(); ++i) new_index[kept[i]] = static_cast<std::uint32_t>(i);

    std::unordered_map<std::uint64_t, std::int64_t> weights;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const std::uint32_t old_u = index_.at(kept[i]);
        for (const Edge& e : out_[old_u]) {
            const auto it = new_index.find(node_ids_[e.to]);
            if (it == new_index.end()) continue;
            weights[(static_cast<std::uint64_t>(i) << 32) | it->second] += e.weight;
        }
    }
    return from_edges(std::move(kept), weights);
}

Condensation strongly_connected_components(const ForwardGraph& g) {
    const std::size_t n = g.size();
    Condensation c;
    c.scc_of.assign(n, 0);

    // Iterative Tarjan.
    constexpr std::uint32_t kUnvisited = 0xFFFFFFFFu;
    std::vector<std::uint32_t> low(n, 0), disc(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::uint32_t timer = 0;

    struct Frame {
        std::uint32_t node;
        std::size_t edge_pos;
    };
    std::vector<Frame> call_stack;

    std::vector<std::uint32_t> scc_of(n, 0);
    std::uint32_t scc_count = 0;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (disc[root] != kUnvisited) continue;
        call_stack.push_back({root, 0});
        disc[root] = low[root] = timer++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call_stack.empty()) {
            Frame& fr = call_stack.back();
            const std::uint32_t u = fr.node;
            const auto& edges = g.out_edges(u);
            if (fr.edge_pos < edges.size()) {
                const std::uint32_t v = edges[fr.edge_pos++].to;
                if (disc[v] == kUnvisited) {
                    disc[v] = low[v] = timer++;
                    stack.push_back(v);
                    on_stack[v] = true;
                    call_stack.push_back({v, 0});
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], disc[v]);
                }
                continue;
            }
            if (low[u] == disc[u]) {
                for (;;) {
                    const std::uint32_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc_of[w] = scc_count;
                    if (w == u) break;
                }
                ++scc_count;
            }
            call_stack.pop_back();
            if (!call_stack.empty()) {
                low[call_stack.back().node] = std::min(low[call_stack.back().node], low[u]);
            }
        }
    }

    c.scc_of = std::move(scc_of);
    c.scc_count = scc_count;
    c.scc_size.assign(scc_count, 0);
    for (std::size_t u = 0; u < n; ++u) ++c.scc_size[c.scc_of[u]];

    c.dag_out.assign(scc_count, {});
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& e : g.out_edges(u)) {
            const std::uint32_t a = c.scc_of[u], b = c.scc_of[e.to];
            if (a != b) c.dag_out[a].push_back(b);
        }
    }
    for (auto& adj : c.dag_out) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }

    for (std::uint32_t s = 0; s < scc_count; ++s) {
        c.largest_scc = std::max<std::size_t>(c.largest_scc, c.scc_size[s]);
        if (c.scc_size[s] >= 2) ++c.components_ge2;
        else ++c.singleton_sccs;
    }
    for (std::size_t u = 0; u < n; ++u) {
        if (g.out_degree(u) == 0 && g.in_degree(u) == 0) ++c.degree_zero_nodes;
    }
    return c;
}

std::vector<std::vector<int>> hop_distances(const ForwardGraph& g,
                                            const std::vector<std::uint32_t>& sources,
                                            const std::vector<std::uint32_t>& targets,
                                            unsigned threads) {
    std::vector<std::vector<int>> result(sources.size());
    parallel_for(sources.size(), threads, [&](std::size_t si) {
        std::vector<int> dist(g.size(), kUnreachable);
        std::deque<std::uint32_t> queue;
        dist[sources[si]] = 0;
        queue.push_back(sources[si]);
        while (!queue.empty()) {
            const std::uint32_t u = queue.front();
            queue.pop_front();
            for (const auto& e : g.out_edges(u)) {
                if (dist[e.to] == kUnreachable) {
                    dist[e.to] = dist[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        std::vector<int> row(targets.size());
        for (std::size_t ti = 0; ti < targets.size(); ++ti) row[ti] = dist[targets[ti]];
        result[si] = std::move(row);
    });
    return result;
}

std::vector<double> pagerank(const ForwardGraph& g, double damping, double tol, int max_iter) {
    const std::size_t n = g.size();
    if (n == 0) return {};
    if (!(damping > 0.0 && damping < 1.0)) throw std::invalid_argument("damping must be in (0,1)");

    std::vector<double> rank(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);

    for (int iter = 0; iter < max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (g.out_degree(u) == 0) dangling += rank[u];
        }
        const double base = (1.0 - damping) / static_cast<double>(n) +
                            damping * dangling / static_cast<double>(n);
        std::fill(next.begin(), next.end(), base);
        for (std::size_t u = 0; u < n; ++u) {
            const std::size_t deg = g.out_degree(u);
            if (deg == 0) continue;
            const double share = damping * rank[u] / static_cast<double>(deg);
            for (const auto& e : g.out_edges(u)) next[e.to] += share;
        }
        double delta = 0.0;
        for (std::size_t u = 0; u < n; ++u) delta += std::abs(next[u] - rank[u]);
        rank.swap(next);
        if (delta < tol) {
            // Exact unit sum, independent of accumulated FP drift.
            const double total = simd::sum(rank.data(), n);
            simd::scale(rank.data(), 1.0 / total, n);
            return rank;
        }
    }
    double final_delta = 0.0;
    for (std::size_t u = 0; u < n; ++u) final_delta += std::abs(next[u] - rank[u]);
    throw PagerankError("pagerank did not converge after " + std::to_string(max_iter) +
                            " iterations (final L1 delta " + std::to_string(final_delta) + ")",
                        final_delta);
}

DegreeExtremes degree_extremes(const ForwardGraph& g) {
    if (g.size() == 0) throw std::invalid_argument("degree_extremes: empty graph");
    DegreeExtremes ex;
    ex.max_out_channel = g.node_id(0);
    ex.max_in_channel = g.node_id(0);
    for (std::size_t u = 0; u < g.size(); ++u) {
        const std::size_t od = g.out_degree(u), id = g.in_degree(u);
        const std::int64_t cid = g.node_id(u);
        if (od > ex.max_out_degree || (od == ex.max_out_degree && cid < ex.max_out_channel)) {
            ex.max_out_degree = od;
            ex.max_out_channel = cid;
        }
        if (id > ex.max_in_degree || (id == ex.max_in_degree && cid < ex.max_in_channel)) {
            ex.max_in_degree = id;
            ex.max_in_channel = cid;
        }
    }
    return ex;
}

}  // namespace chanalyze
