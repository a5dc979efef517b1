#include "chanalyze/community.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "chanalyze/util/rng.hpp"

namespace chanalyze {

namespace {

// Undirected weighted view used by all Leiden levels. Aggregated levels may
// carry self-loops (internal weight of a collapsed cluster).
struct Level {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
    std::vector<double> self_loop;
    std::vector<double> strength;  // sum of incident weights, self loops twice
    double total_weight = 0;       // W: undirected edges once, self loops once

    std::size_t size() const { return adj.size(); }
};

Level symmetrize(const ForwardGraph& g) {
    Level lv;
    const std::size_t n = g.size();
    lv.adj.resize(n);
    lv.self_loop.assign(n, 0.0);
    lv.strength.assign(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        // w_sym(u,v) = w(u->v) + w(v->u); each undirected edge emitted from
        // its smaller endpoint.
        for (const auto& e : g.out_edges(u)) {
            if (e.to == u) continue;
            double w = static_cast<double>(e.weight);
            for (const auto& back : g.out_edges(e.to)) {
                if (back.to == u) {
                    w += static_cast<double>(back.weight);
                    break;
                }
            }
            if (u < e.to) {
                lv.adj[u].emplace_back(e.to, w);
                lv.adj[e.to].emplace_back(static_cast<std::uint32_t>(u), w);
                lv.total_weight += w;
            } else {
                // handled when scanning from the smaller endpoint unless the
                // reverse edge does not exist there
                bool has_reverse = false;
                for (const auto& fwd : g.out_edges(e.to)) {
                    if (fwd.to == u) {
                        has_reverse = true;
                        break;
                    }
                }
                if (!has_reverse) {
                    lv.adj[u].emplace_back(e.to, w);
                    lv.adj[e.to].emplace_back(static_cast<std::uint32_t>(u), w);
                    lv.total_weight += w;
                }
            }
        }
    }
    for (std::size_t u = 0; u < n; ++u) {
        std::sort(lv.adj[u].begin(), lv.adj[u].end());
        for (const auto& [v, w] : lv.adj[u]) lv.strength[u] += w;
    }
    return lv;
}

// One Leiden level working on `lv` with partition state. `init` carries the
// partition found before aggregation (empty = start from singletons).
class LevelState {
 public:
    LevelState(const Level& lv, double resolution, const std::vector<std::uint32_t>& init)
        : lv_(lv), gamma_(resolution), comm_of_(lv.size()), comm_strength_(lv.size(), 0.0) {
        if (init.empty()) {
            std::iota(comm_of_.begin(), comm_of_.end(), 0u);
        } else {
            comm_of_ = init;
        }
        for (std::size_t u = 0; u < lv.size(); ++u) comm_strength_[comm_of_[u]] += lv.strength[u];
        two_w_ = 0.0;
        for (std::size_t u = 0; u < lv.size(); ++u) two_w_ += lv.strength[u];
        if (two_w_ <= 0.0) two_w_ = 1.0;  // edgeless: gains all zero
    }

    const std::vector<std::uint32_t>& communities() const { return comm_of_; }

    // Queue-based local moving. Returns number of moves.
    std::size_t local_move(Rng& rng) {
        const std::size_t n = lv_.size();
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        rng.shuffle(order);

        std::deque<std::uint32_t> queue(order.begin(), order.end());
        std::vector<bool> queued(n, true);

        std::vector<double> weight_to(n, 0.0);  // indexed by community
        std::vector<std::uint32_t> touched;

        std::size_t moves = 0;
        while (!queue.empty()) {
            const std::uint32_t u = queue.front();
            queue.pop_front();
            queued[u] = false;

            const std::uint32_t current = comm_of_[u];
            touched.clear();
            for (const auto& [v, w] : lv_.adj[u]) {
                const std::uint32_t c = comm_of_[v];
                if (weight_to[c] == 0.0) touched.push_back(c);
                weight_to[c] += w;
            }
            if (weight_to[current] == 0.0) touched.push_back(current);

            comm_strength_[current] -= lv_.strength[u];

            // score(c) = k_{u,c} - gamma * k_u * strength(c) / 2W
            double best_score = weight_to[current] -
                                gamma_ * lv_.strength[u] * comm_strength_[current] / two_w_;
            std::uint32_t best = current;
            for (const std::uint32_t c : touched) {
                if (c == current) continue;
                const double score =
                    weight_to[c] - gamma_ * lv_.strength[u] * comm_strength_[c] / two_w_;
                if (score > best_score + 1e-12 ||
                    (score > best_score - 1e-12 && c < best && best != current)) {
                    best_score = score;
                    best = c;
                }
            }
            // An empty community scores 0; take it when everything else is
            // negative (keeps the node a singleton).
            if (best_score < -1e-12 && comm_strength_[current] > 0.0) {
                const std::uint32_t fresh = find_free_community();
                if (fresh != current) {
                    best = fresh;
                    best_score = 0.0;
                }
            }

            comm_strength_[best] += lv_.strength[u];
            for (const std::uint32_t c : touched) weight_to[c] = 0.0;

            if (best != current) {
                comm_of_[u] = best;
                ++moves;
                for (const auto& [v, w] : lv_.adj[u]) {
                    if (comm_of_[v] != best && !queued[v]) {
                        queue.push_back(v);
                        queued[v] = true;
                    }
                }
            }
        }
        return moves;
    }

    // Refinement: within each local-move community, re-grow communities from
    // singletons; only singleton, well-connected nodes merge. Returns the
    // refined partition (dense ids).
    std::vector<std::uint32_t> refine(Rng& rng) {
        const std::size_t n = lv_.size();
        std::vector<std::uint32_t> refined(n);
        std::iota(refined.begin(), refined.end(), 0u);
        std::vector<double> ref_strength = lv_.strength;
        std::vector<bool> is_singleton(n, true);

        // strength of each local-move community, and each node's weight to
        // the rest of its community
        std::vector<double> comm_total(n, 0.0);
        for (std::size_t u = 0; u < n; ++u) comm_total[comm_of_[u]] += lv_.strength[u];

        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        rng.shuffle(order);

        std::vector<double> weight_to(n, 0.0);
        std::vector<std::uint32_t> touched;

        for (const std::uint32_t u : order) {
            if (!is_singleton[u]) continue;
            const std::uint32_t parent = comm_of_[u];

            double to_parent = 0.0;
            touched.clear();
            for (const auto& [v, w] : lv_.adj[u]) {
                if (comm_of_[v] != parent || v == u) continue;
                to_parent += w;
                const std::uint32_t rc = refined[v];
                if (weight_to[rc] == 0.0) touched.push_back(rc);
                weight_to[rc] += w;
            }
            // well-connectedness of u within its parent community
            const double ku = lv_.strength[u];
            if (to_parent <
                gamma_ * ku * (comm_total[parent] - ku) / two_w_ - 1e-12) {
                for (const std::uint32_t c : touched) weight_to[c] = 0.0;
                continue;
            }

            double best_score = 0.0;  // staying a singleton scores 0
            std::uint32_t best = refined[u];
            for (const std::uint32_t rc : touched) {
                if (rc == refined[u]) continue;
                const double score = weight_to[rc] - gamma_ * ku * ref_strength[rc] / two_w_;
                if (score > best_score + 1e-12 ||
                    (score > best_score - 1e-12 && best != refined[u] && rc < best)) {
                    best_score = score;
                    best = rc;
                }
            }
            for (const std::uint32_t c : touched) weight_to[c] = 0.0;

            if (best != refined[u]) {
                ref_strength[best] += ku;
                ref_strength[refined[u]] -= ku;
                refined[u] = best;
                is_singleton[u] = false;
                is_singleton[best] = false;  // target community no longer singleton-only
            }
        }

        // dense renumber in order of first appearance
        std::vector<std::uint32_t> remap(n, UINT32_MAX);
        std::uint32_t next = 0;
        for (std::size_t u = 0; u < n; ++u) {
            if (remap[refined[u]] == UINT32_MAX) remap[refined[u]] = next++;
            refined[u] = remap[refined[u]];
        }
        return refined;
    }

 private:
    std::uint32_t find_free_community() {
        for (std::uint32_t c = 0; c < comm_strength_.size(); ++c) {
            if (comm_strength_[c] == 0.0) return c;
        }
        return static_cast<std::uint32_t>(comm_strength_.size() - 1);
    }

    const Level& lv_;
    double gamma_;
    std::vector<std::uint32_t> comm_of_;
    std::vector<double> comm_strength_;
    double two_w_ = 0;
};

Level aggregate(const Level& lv, const std::vector<std::uint32_t>& refined,
                std::uint32_t refined_count) {
    Level out;
    out.adj.resize(refined_count);
    out.self_loop.assign(refined_count, 0.0);
    out.strength.assign(refined_count, 0.0);

    std::vector<std::vector<std::pair<std::uint32_t, double>>> buckets(refined_count);
    for (std::size_t u = 0; u < lv.size(); ++u) {
        const std::uint32_t a = refined[u];
        out.self_loop[a] += lv.self_loop[u];
        for (const auto& [v, w] : lv.adj[u]) {
            const std::uint32_t b = refined[v];
            if (a == b) {
                if (u < v) out.self_loop[a] += w;  // each internal edge once
            } else {
                buckets[a].emplace_back(b, w);
            }
        }
    }
    for (std::uint32_t a = 0; a < refined_count; ++a) {
        auto& b = buckets[a];
        std::sort(b.begin(), b.end());
        for (std::size_t i = 0; i < b.size();) {
            std::size_t j = i;
            double w = 0;
            while (j < b.size() && b[j].first == b[i].first) w += b[j++].second;
            out.adj[a].emplace_back(b[i].first, w);
            i = j;
        }
    }
    for (std::uint32_t a = 0; a < refined_count; ++a) {
        out.strength[a] = 2.0 * out.self_loop[a];
        for (const auto& [v, w] : out.adj[a]) {
            out.strength[a] += w;
            if (a < v) out.total_weight += w;
        }
        out.total_weight += out.self_loop[a];
    }
    return out;
}

// Split any disconnected community into its connected components. With a
// squared-degree penalty this never decreases modularity.
void split_disconnected(const Level& lv, std::vector<std::uint32_t>& comm) {
    const std::size_t n = lv.size();
    std::vector<std::uint32_t> new_comm(n, UINT32_MAX);
    std::uint32_t next = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (new_comm[start] != UINT32_MAX) continue;
        const std::uint32_t label = next++;
        std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(start)};
        new_comm[start] = label;
        while (!queue.empty()) {
            const std::uint32_t u = queue.front();
            queue.pop_front();
            for (const auto& [v, w] : lv.adj[u]) {
                if (new_comm[v] == UINT32_MAX && comm[v] == comm[u]) {
                    new_comm[v] = label;
                    queue.push_back(v);
                }
            }
        }
    }
    comm = std::move(new_comm);
}

}  // namespace

CommunityAssignment leiden(const ForwardGraph& g, double resolution, std::uint64_t seed) {
    const std::size_t n = g.size();
    CommunityAssignment out;
    if (n == 0) return out;

    Level level = symmetrize(g);
    std::vector<std::uint32_t> membership(n);  // original node -> current level node
    std::iota(membership.begin(), membership.end(), 0u);
    std::vector<std::uint32_t> init;  // carried partition for the current level

    Rng rng(seed ^ 0x1EDE17A1D5EEDULL);
    std::vector<std::uint32_t> final_comm;

    for (int round = 0; round < 64; ++round) {
        LevelState state(level, resolution, init);
        const std::size_t moves = state.local_move(rng);
        const std::vector<std::uint32_t>& local = state.communities();

        std::uint32_t distinct = 0;
        {
            std::vector<std::uint32_t> seen(level.size(), UINT32_MAX);
            for (std::size_t x = 0; x < level.size(); ++x) {
                if (seen[local[x]] == UINT32_MAX) seen[local[x]] = distinct++;
            }
        }
        if (moves == 0 || distinct == level.size() || level.size() == 1) {
            final_comm.resize(n);
            for (std::size_t u = 0; u < n; ++u) final_comm[u] = local[membership[u]];
            break;
        }

        const std::vector<std::uint32_t> refined = state.refine(rng);
        std::uint32_t refined_count = 0;
        for (const std::uint32_t r : refined) refined_count = std::max(refined_count, r + 1);

        // Carry the local-move partition onto the aggregated nodes (each
        // refined cluster lies inside exactly one local community).
        std::vector<std::uint32_t> carried(refined_count, 0);
        for (std::size_t x = 0; x < level.size(); ++x) carried[refined[x]] = local[x];
        {
            std::vector<std::uint32_t> remap(level.size(), UINT32_MAX);
            std::uint32_t next = 0;
            for (auto& c : carried) {
                if (remap[c] == UINT32_MAX) remap[c] = next++;
                c = remap[c];
            }
        }

        for (std::size_t u = 0; u < n; ++u) membership[u] = refined[membership[u]];
        level = aggregate(level, refined, refined_count);
        init = std::move(carried);
    }
    if (final_comm.empty()) {  // round cap: fall back to the carried state
        final_comm.resize(n);
        for (std::size_t u = 0; u < n; ++u) {
            final_comm[u] = init.empty() ? membership[u] : init[membership[u]];
        }
    }

    // connectivity guard on the original graph
    const Level base = symmetrize(g);
    split_disconnected(base, final_comm);

    std::uint32_t count = 0;
    std::vector<std::uint32_t> remap(n, UINT32_MAX);
    for (std::size_t u = 0; u < n; ++u) {
        if (remap[final_comm[u]] == UINT32_MAX) remap[final_comm[u]] = count++;
        final_comm[u] = remap[final_comm[u]];
    }
    out.community_of = std::move(final_comm);
    out.community_count = count;
    return out;
}

double modularity(const ForwardGraph& g, const CommunityAssignment& a, double resolution) {
    if (a.community_of.size() != g.size()) {
        throw std::invalid_argument("modularity: assignment does not cover every node");
    }
    const Level lv = symmetrize(g);
    if (lv.total_weight <= 0.0) return 0.0;

    const std::uint32_t k = a.community_count;
    std::vector<double> internal(k, 0.0), degree(k, 0.0);
    for (std::size_t u = 0; u < lv.size(); ++u) {
        const std::uint32_t cu = a.community_of[u];
        degree[cu] += lv.strength[u];
        for (const auto& [v, w] : lv.adj[u]) {
            if (u < v && a.community_of[v] == cu) internal[cu] += w;
        }
        internal[cu] += lv.self_loop[u];
    }
    const double w_total = lv.total_weight;
    double q = 0.0;
    for (std::uint32_t c = 0; c < k; ++c) {
        const double frac = degree[c] / (2.0 * w_total);
        q += internal[c] / w_total - resolution * frac * frac;
    }
    return q;
}

CommunitySelection community_of(const ForwardGraph& g, const CommunityAssignment& a,
                                const std::vector<std::int64_t>& anchors) {
    if (anchors.empty()) throw std::invalid_argument("community_of: no anchors");
    CommunitySelection sel;
    std::unordered_set<std::uint32_t> hit;
    for (const std::int64_t anchor : anchors) {
        const auto idx = g.index_of(anchor);
        if (!idx) throw std::invalid_argument("community_of: unknown anchor " + std::to_string(anchor));
        hit.insert(a.community_of[*idx]);
    }
    sel.communities.assign(hit.begin(), hit.end());
    std::sort(sel.communities.begin(), sel.communities.end());
    sel.spans_multiple = sel.communities.size() > 1;
    for (std::size_t u = 0; u < g.size(); ++u) {
        if (hit.count(a.community_of[u]) != 0) sel.channel_ids.push_back(g.node_id(u));
    }
    std::sort(sel.channel_ids.begin(), sel.channel_ids.end());
    return sel;
}

}  // namespace chanalyze
