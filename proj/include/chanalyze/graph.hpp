#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "chanalyze/data_model.hpp"

namespace chanalyze {

// Directed forward graph: edge u -> v means channel u posted messages whose
// forward origin is channel v (a reader of u can navigate to v). Weight =
// number of such messages. Self-loops are dropped at build time. Nodes are
// addressed by dense index; node_ids() maps back to channel ids.
class ForwardGraph {
 public:
    struct Edge {
        std::uint32_t to;
        std::int64_t weight;
    };

    static ForwardGraph from_edges(std::vector<std::int64_t> node_ids,
                                   const std::unordered_map<std::uint64_t, std::int64_t>& weights);

    std::size_t size() const { return node_ids_.size(); }
    const std::vector<std::int64_t>& node_ids() const { return node_ids_; }
    std::int64_t node_id(std::size_t idx) const { return node_ids_[idx]; }

    std::optional<std::uint32_t> index_of(std::int64_t channel_id) const {
        const auto it = index_.find(channel_id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<Edge>& out_edges(std::size_t u) const { return out_[u]; }
    const std::vector<Edge>& in_edges(std::size_t u) const { return in_[u]; }
    std::size_t out_degree(std::size_t u) const { return out_[u].size(); }  // distinct neighbors
    std::size_t in_degree(std::size_t u) const { return in_[u].size(); }

    std::size_t edge_count() const { return edge_count_; }
    std::int64_t total_weight() const { return total_weight_; }

    // Induced subgraph; keeps the original channel ids.
    ForwardGraph restricted_to(const std::vector<std::int64_t>& channel_ids) const;

 private:
    std::vector<std::int64_t> node_ids_;
    std::unordered_map<std::int64_t, std::uint32_t> index_;
    std::vector<std::vector<Edge>> out_;
    std::vector<std::vector<Edge>> in_;
    std::size_t edge_count_ = 0;
    std::int64_t total_weight_ = 0;
};

struct GraphBuildResult {
    ForwardGraph graph;
    std::size_t external_origin_forwards = 0;  // origin id missing or not in dataset
    std::size_t self_forwards = 0;             // origin == posting channel
};

GraphBuildResult build_forward_graph(const Dataset& ds);

struct Condensation {
    std::vector<std::uint32_t> scc_of;  // node index -> scc id (dense from 0)
    std::uint32_t scc_count = 0;
    std::vector<std::uint32_t> scc_size;
    std::vector<std::vector<std::uint32_t>> dag_out;  // deduplicated scc DAG edges
    std::size_t largest_scc = 0;
    std::size_t components_ge2 = 0;       // SCCs with at least two nodes
    std::size_t degree_zero_nodes = 0;    // no in- or out-edges at all
    std::size_t singleton_sccs = 0;
};

Condensation strongly_connected_components(const ForwardGraph& g);

inline constexpr int kUnreachable = -1;

// Unweighted directed shortest paths (hops) from each source to each target.
// result[i][j] = hops from sources[i] to targets[j], kUnreachable if none.
std::vector<std::vector<int>> hop_distances(const ForwardGraph& g,
                                            const std::vector<std::uint32_t>& sources,
                                            const std::vector<std::uint32_t>& targets,
                                            unsigned threads = 1);

class PagerankError : public std::runtime_error {
 public:
    PagerankError(const std::string& what, double final_delta)
        : std::runtime_error(what), final_delta(final_delta) {}
    double final_delta;
};

// Unweighted-link PageRank; dangling mass redistributed uniformly. Scores
// sum to 1. Throws PagerankError if the L1 delta is still >= tol after
// max_iter sweeps.
std::vector<double> pagerank(const ForwardGraph& g, double damping = 0.85, double tol = 1e-9,
                             int max_iter = 200);

struct DegreeExtremes {
    std::int64_t max_out_channel = 0;
    std::size_t max_out_degree = 0;
    std::int64_t max_in_channel = 0;
    std::size_t max_in_degree = 0;
};

// Distinct-neighbor degrees; ties broken by smallest channel id. Throws on
// an empty graph.
DegreeExtremes degree_extremes(const ForwardGraph& g);

}  // namespace chanalyze
