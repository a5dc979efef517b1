#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <set>

#include "chanalyze/community.hpp"
#include "oracles.hpp"

using namespace chanalyze;

namespace {

// planted partition: `blocks` groups of `size` nodes; directed edge direction
// randomized, symmetrized inside leiden anyway
std::pair<ForwardGraph, std::vector<std::uint32_t>> planted_partition(Rng& rng,
                                                                      std::size_t blocks,
                                                                      std::size_t size,
                                                                      double p_in, double p_out) {
    const std::size_t n = blocks * size;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::uint32_t> truth(n);
    for (std::size_t i = 0; i < n; ++i) truth[i] = static_cast<std::uint32_t>(i / size);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double p = truth[u] == truth[v] ? p_in : p_out;
            if (!rng.bernoulli(p)) continue;
            if (rng.bernoulli(0.5)) edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
            else edges.emplace_back(static_cast<int>(v), static_cast<int>(u));
        }
    }
    return {oracle::graph_from_edges(n, edges), truth};
}

bool communities_connected(const ForwardGraph& g, const CommunityAssignment& a) {
    // BFS over the symmetrized graph restricted to each community
    for (std::uint32_t c = 0; c < a.community_count; ++c) {
        std::vector<std::uint32_t> members;
        for (std::uint32_t u = 0; u < g.size(); ++u) {
            if (a.community_of[u] == c) members.push_back(u);
        }
        if (members.size() <= 1) continue;
        std::set<std::uint32_t> seen{members[0]};
        std::deque<std::uint32_t> queue{members[0]};
        while (!queue.empty()) {
            const std::uint32_t u = queue.front();
            queue.pop_front();
            const auto visit = [&](std::uint32_t v) {
                if (a.community_of[v] == c && seen.insert(v).second) queue.push_back(v);
            };
            for (const auto& e : g.out_edges(u)) visit(e.to);
            for (const auto& e : g.in_edges(u)) visit(e.to);
        }
        if (seen.size() != members.size()) return false;
    }
    return true;
}

CommunityAssignment singleton_partition(const ForwardGraph& g) {
    CommunityAssignment a;
    a.community_count = static_cast<std::uint32_t>(g.size());
    a.community_of.resize(g.size());
    for (std::uint32_t u = 0; u < g.size(); ++u) a.community_of[u] = u;
    return a;
}

}  // namespace

TEST_CASE("two disjoint triangles split into two communities") {
    const ForwardGraph g =
        oracle::graph_from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    const CommunityAssignment a = leiden(g, 1.0, 1);
    CHECK(a.community_count == 2);
    CHECK(a.community_of[0] == a.community_of[1]);
    CHECK(a.community_of[1] == a.community_of[2]);
    CHECK(a.community_of[3] == a.community_of[4]);
    CHECK(a.community_of[4] == a.community_of[5]);
    CHECK(a.community_of[0] != a.community_of[3]);

    CHECK(modularity(g, a) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("complete graph is one community") {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < 6; ++u) {
        for (int v = u + 1; v < 6; ++v) edges.emplace_back(u, v);
    }
    const ForwardGraph g = oracle::graph_from_edges(6, edges);
    const CommunityAssignment a = leiden(g, 1.0, 3);
    CHECK(a.community_count == 1);
}

TEST_CASE("modularity fixtures") {
    // 2-cycle, all nodes in one community: Q = 1 - 1 = 0
    const ForwardGraph two = oracle::graph_from_edges(2, {{0, 1}, {1, 0}});
    CommunityAssignment one;
    one.community_count = 1;
    one.community_of = {0, 0};
    CHECK(modularity(two, one) == doctest::Approx(0.0).epsilon(1e-12));

    // edgeless graph: Q defined as 0
    const ForwardGraph edgeless = oracle::graph_from_edges(3, {});
    CHECK(modularity(edgeless, singleton_partition(edgeless)) == 0.0);

    // assignment must cover every node
    CommunityAssignment bad;
    bad.community_count = 1;
    bad.community_of = {0};
    CHECK_THROWS_AS(modularity(two, bad), std::invalid_argument);
}

TEST_CASE("planted partition recovery") {
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(900 + seed);
        const auto [g, truth] = planted_partition(rng, 4, 25, 0.3, 0.01);
        const CommunityAssignment a = leiden(g, 1.0, seed);
        if (oracle::adjusted_rand(a.community_of, truth) >= 0.9) ++hits;
    }
    CHECK(hits >= 4);
}

TEST_CASE("leiden invariants on random graphs") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + rng.uniform_int(40);
        const auto edges = oracle::random_digraph(rng, n, 0.1);
        const ForwardGraph g = oracle::graph_from_edges(n, edges);
        const CommunityAssignment a = leiden(g, 1.0, trial);

        // total partition with dense ids
        REQUIRE(a.community_of.size() == n);
        for (const std::uint32_t c : a.community_of) CHECK(c < a.community_count);

        CHECK(communities_connected(g, a));
        CHECK(modularity(g, a) >= modularity(g, singleton_partition(g)) - 1e-12);

        // deterministic at fixed seed
        const CommunityAssignment again = leiden(g, 1.0, trial);
        CHECK(a.community_of == again.community_of);
    }
}

TEST_CASE("community_of selects anchored communities") {
    const ForwardGraph g =
        oracle::graph_from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    const CommunityAssignment a = leiden(g, 1.0, 9);

    // channel ids are 1-based node indices in graph_from_edges
    const CommunitySelection sel = community_of(g, a, {1});
    CHECK(sel.channel_ids == std::vector<std::int64_t>{1, 2, 3});
    CHECK_FALSE(sel.spans_multiple);

    const CommunitySelection both = community_of(g, a, {1, 4});
    CHECK(both.spans_multiple);
    CHECK(both.channel_ids.size() == 6);

    CHECK_THROWS_AS(community_of(g, a, {404}), std::invalid_argument);
}
