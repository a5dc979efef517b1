#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "chanalyze/coordination.hpp"
#include "chanalyze/synth.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace chanalyze;
using namespace chanalyze::testing;

namespace {

std::vector<std::size_t> all_indices(const Dataset& ds) {
    std::vector<std::size_t> idx(ds.channel_count());
    std::iota(idx.begin(), idx.end(), 0u);
    return idx;
}

}  // namespace

TEST_CASE("message reuse") {
    SUBCASE("same message in three channels") {
        std::vector<ChannelRecord> channels = {make_channel(1), make_channel(2), make_channel(3)};
        std::vector<MessageRecord> msgs = {make_text(1, 1, 100, "hello world"),
                                           make_text(2, 1, 110, "hello world"),
                                           make_text(3, 1, 120, "hello world")};
        const Dataset ds = build_dataset(channels, msgs);
        const ReuseReport r = message_reuse(ds, all_indices(ds));
        CHECK(r.total_messages == 3);
        CHECK(r.distinct == 1);
        REQUIRE(r.top.size() == 1);
        CHECK(r.top[0].count == 3);
        CHECK(r.top[0].sample == "hello world");
    }

    SUBCASE("all-unique corpus") {
        std::vector<ChannelRecord> channels = {make_channel(1)};
        std::vector<MessageRecord> msgs;
        for (int i = 0; i < 5; ++i) {
            msgs.push_back(make_text(1, i + 1, 100 + i, "unique " + std::to_string(i)));
        }
        const ReuseReport r = message_reuse(build_dataset(channels, msgs), {0});
        CHECK(r.distinct == r.total_messages);
    }

    SUBCASE("occurrence counts sum to total") {
        UniverseSpec spec;
        spec.seed = 12;
        spec.standard_channels = 0;
        spec.conspiracy_channels = 12;
        spec.conspiracy_distinct_messages = 60;
        const Universe u = generate_universe(spec);
        const ReuseReport r = message_reuse(u.dataset, all_indices(u.dataset));
        std::size_t sum = 0;
        for (const std::size_t c : r.counts) sum += c;
        CHECK(sum == r.total_messages);
        CHECK(r.distinct == 60);
    }
}

TEST_CASE("forwarding delays") {
    SUBCASE("hand computation") {
        std::vector<ChannelRecord> channels = {make_channel(1), make_channel(2), make_channel(3)};
        std::vector<MessageRecord> msgs = {make_text(1, 1, 1000, "the message text"),
                                           make_text(2, 1, 1060, "the message text"),
                                           make_text(3, 1, 1120, "the message text"),
                                           make_text(1, 2, 1500, "a lonely message")};
        const Dataset ds = build_dataset(channels, msgs);
        const DelayProfile p = forwarding_delays(ds, all_indices(ds));
        REQUIRE(p.messages.size() == 1);  // the unique message is excluded
        CHECK(p.messages[0].first == doctest::Approx(60.0));
        CHECK(p.messages[0].mean == doctest::Approx(90.0));
        CHECK(p.messages[0].last == doctest::Approx(120.0));
        CHECK(p.frac_first_within_10min == doctest::Approx(1.0));
        CHECK(p.frac_last_within_24h == doctest::Approx(1.0));
    }

    SUBCASE("scripted all-forwards-at-300s network") {
        std::vector<ChannelRecord> channels;
        std::vector<MessageRecord> msgs;
        for (int c = 1; c <= 6; ++c) channels.push_back(make_channel(c));
        for (int m = 0; m < 10; ++m) {
            const std::string text = "broadcast number " + std::to_string(m);
            msgs.push_back(make_text(1, m + 1, 5000 + m * 10, text));
            for (int c = 2; c <= 6; ++c) {
                msgs.push_back(make_text(c, m + 1, 5000 + m * 10 + 300, text));
            }
        }
        const Dataset ds = build_dataset(channels, msgs);
        const DelayProfile p = forwarding_delays(ds, all_indices(ds));
        CHECK(p.frac_first_within_10min == doctest::Approx(1.0));
        for (const auto& md : p.messages) {
            CHECK(md.first == doctest::Approx(300.0));
            CHECK(md.last == doctest::Approx(300.0));
        }
    }

    SUBCASE("first <= mean <= last always") {
        UniverseSpec spec;
        spec.seed = 9;
        spec.standard_channels = 0;
        spec.conspiracy_channels = 15;
        spec.conspiracy_distinct_messages = 80;
        const Universe u = generate_universe(spec);
        const DelayProfile p = forwarding_delays(u.dataset, all_indices(u.dataset));
        for (const auto& md : p.messages) {
            CHECK(md.first <= md.mean + 1e-9);
            CHECK(md.mean <= md.last + 1e-9);
        }
    }

    SUBCASE("metadata discrepancy counting") {
        std::vector<ChannelRecord> channels = {make_channel(1), make_channel(2)};
        // forward metadata claims an origin before any observed occurrence
        MessageRecord copy = with_fwd(make_text(2, 1, 1100, "shared text"), 1, 900);
        std::vector<MessageRecord> msgs = {make_text(1, 1, 1000, "shared text"), copy};
        const DelayProfile p = forwarding_delays(build_dataset(channels, msgs), {0, 1});
        CHECK(p.metadata_discrepancies == 1);
    }
}

TEST_CASE("network coverage") {
    std::vector<ChannelRecord> channels;
    for (int c = 1; c <= 10; ++c) channels.push_back(make_channel(c));
    std::vector<MessageRecord> msgs;
    // message in every channel
    for (int c = 1; c <= 10; ++c) msgs.push_back(make_text(c, 1, 100 + c, "everywhere text"));
    // message in exactly one channel, once
    msgs.push_back(make_text(1, 2, 300, "never forwarded text"));
    // message in one channel, posted twice (forwarded but coverage 1/10)
    msgs.push_back(make_text(2, 2, 300, "self repeat"));
    msgs.push_back(make_text(2, 3, 360, "self repeat"));

    const Dataset ds = build_dataset(channels, msgs);
    const CoverageReport r = network_coverage(ds, all_indices(ds));
    CHECK(r.channel_count == 10);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].coverage == doctest::Approx(1.0));

    std::size_t band_sum = 0;
    for (const std::size_t b : r.bands) band_sum += b;
    CHECK(band_sum == r.rows.size());
    CHECK(r.bands[0] == 1);  // exactly the never-forwarded message
    CHECK(r.bands[1] == 1);  // the self-repeat lands in (0,20%]
    CHECK(r.bands[5] == 1);  // full coverage band

    for (const auto& row : r.rows) {
        CHECK(row.coverage > 0.0);
        CHECK(row.coverage <= 1.0);
    }
}

TEST_CASE("core channel detection") {
    SUBCASE("star: everyone forwards from the hub") {
        // nodes 1..6; edges u->1 for u in 2..6 (u forwards from 1)
        std::vector<std::pair<int, int>> edges;
        for (int u = 1; u < 6; ++u) edges.emplace_back(u, 0);
        // the 5 satellites also form a cycle so they are one SCC
        for (int u = 1; u < 6; ++u) edges.emplace_back(u, u == 5 ? 1 : u + 1);
        const ForwardGraph g = oracle::graph_from_edges(6, edges);
        const CoreChannelReport r = find_core_channels(g, 0.5);
        REQUIRE(r.core.size() == 1);
        CHECK(r.core[0].channel_id == 1);
        CHECK(r.core[0].in_degree == 5);
        CHECK(r.condensation.scc_count == 2);
    }

    SUBCASE("symmetric 2-cycle has no core") {
        const ForwardGraph g = oracle::graph_from_edges(2, {{0, 1}, {1, 0}});
        CHECK(find_core_channels(g).core.empty());
    }

    SUBCASE("threshold behavior") {
        // hub with in-degree 3 of 10 possible (30% coverage)
        std::vector<std::pair<int, int>> edges = {{1, 0}, {2, 0}, {3, 0}};
        for (int u = 1; u <= 10; ++u) edges.emplace_back(u, u == 10 ? 1 : u + 1);
        const ForwardGraph g = oracle::graph_from_edges(11, edges);
        CHECK(find_core_channels(g, 0.5).core.empty());
        const CoreChannelReport low = find_core_channels(g, 0.25);
        REQUIRE(low.core.size() == 1);
        CHECK(low.core[0].channel_id == 1);
    }

    SUBCASE("invariant under node relabeling") {
        Rng rng(71);
        std::vector<std::pair<int, int>> edges;
        for (int u = 1; u < 8; ++u) edges.emplace_back(u, 0);
        for (int u = 1; u < 8; ++u) edges.emplace_back(u, u == 7 ? 1 : u + 1);

        const ForwardGraph g = oracle::graph_from_edges(8, edges);
        const CoreChannelReport base = find_core_channels(g);

        // relabel nodes by a random permutation
        std::vector<int> perm(8);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size() - 1; i > 0; --i) {
            std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
        }
        std::vector<std::pair<int, int>> relabeled;
        for (const auto& [u, v] : edges) relabeled.emplace_back(perm[u], perm[v]);
        const ForwardGraph g2 = oracle::graph_from_edges(8, relabeled);
        const CoreChannelReport shuffled = find_core_channels(g2);

        REQUIRE(base.core.size() == 1);
        REQUIRE(shuffled.core.size() == 1);
        // the same underlying node is reported: original node 0 maps to perm[0]+1 as id
        CHECK(shuffled.core[0].channel_id == perm[0] + 1);
        CHECK(shuffled.core[0].in_degree == base.core[0].in_degree);
        CHECK(shuffled.condensation.scc_count == base.condensation.scc_count);
    }

    SUBCASE("empty subgraph throws") {
        CHECK_THROWS_AS(find_core_channels(oracle::graph_from_edges(0, {})),
                        std::invalid_argument);
    }
}

TEST_CASE("empty channel set is rejected") {
    const Dataset ds = build_dataset({make_channel(1)}, {});
    CHECK_THROWS_AS(message_reuse(ds, {}), std::invalid_argument);
    CHECK_THROWS_AS(forwarding_delays(ds, {}), std::invalid_argument);
    CHECK_THROWS_AS(network_coverage(ds, {}), std::invalid_argument);
}
