#pragma once

#include <cstdint>
#include <vector>

#include "chanalyze/graph.hpp"

namespace chanalyze {

struct CommunityAssignment {
    std::vector<std::uint32_t> community_of;  // node index -> community id, dense from 0
    std::uint32_t community_count = 0;
};

// Leiden community detection (local moving, refinement, aggregation)
// optimizing modularity at the given resolution on the symmetrized weighted
// graph. Deterministic for a fixed seed; every returned community is
// internally connected.
CommunityAssignment leiden(const ForwardGraph& g, double resolution = 1.0,
                           std::uint64_t seed = 0);

// Q = sum_c [ w_in(c)/W - resolution * (deg(c)/2W)^2 ] on the symmetrized
// graph; 0 for an edgeless graph. Throws if the assignment does not cover
// every node.
double modularity(const ForwardGraph& g, const CommunityAssignment& a, double resolution = 1.0);

struct CommunitySelection {
    std::vector<std::int64_t> channel_ids;    // union of the anchored communities
    std::vector<std::uint32_t> communities;   // distinct communities hit by anchors
    bool spans_multiple = false;
};

// Union of the communities containing any anchor channel. Throws on an
// anchor that is not a node of g.
CommunitySelection community_of(const ForwardGraph& g, const CommunityAssignment& a,
                                const std::vector<std::int64_t>& anchors);

}  // namespace chanalyze
