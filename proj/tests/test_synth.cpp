#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "chanalyze/clone.hpp"
#include "chanalyze/community.hpp"
#include "chanalyze/graph.hpp"
#include "chanalyze/synth.hpp"
#include "test_support.hpp"

using namespace chanalyze;
using namespace chanalyze::testing;

namespace {

// na(i)ve crawl closure: BFS over in-window, in-universe forward origins
std::set<std::int64_t> crawl_closure(const Dataset& ds, const std::vector<std::int64_t>& seeds,
                                     std::size_t window) {
    std::set<std::int64_t> known(seeds.begin(), seeds.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const std::int64_t cid : std::set<std::int64_t>(known)) {
            const auto idx = ds.index_of(cid);
            const auto& msgs = ds.messages(*idx);
            const std::size_t from = msgs.size() > window ? msgs.size() - window : 0;
            for (std::size_t k = from; k < msgs.size(); ++k) {
                const auto& m = msgs[k];
                if (m.fwd && m.fwd->from_channel_id && ds.index_of(*m.fwd->from_channel_id)) {
                    if (known.insert(*m.fwd->from_channel_id).second) changed = true;
                }
            }
        }
    }
    return known;
}

}  // namespace

TEST_CASE("empty spec yields an empty valid archive") {
    UniverseSpec spec;
    spec.standard_channels = 0;
    const Universe u = generate_universe(spec);
    CHECK(u.dataset.channel_count() == 0);

    std::ostringstream c, m;
    serialize_dataset_streams(u.dataset, c, m);
    std::istringstream ci(c.str()), mi(m.str());
    CHECK(parse_dataset_streams(ci, mi).channel_count() == 0);
}

TEST_CASE("generated archives pass parser validation") {
    UniverseSpec spec;
    spec.seed = 31;
    spec.standard_channels = 10;
    spec.official_channels = 4;
    spec.fake_channels = 4;
    spec.clone_originals = 2;
    spec.clone_pairs = 4;
    spec.conspiracy_channels = 10;
    spec.conspiracy_distinct_messages = 50;
    const Universe u = generate_universe(spec);

    std::ostringstream c, m;
    serialize_dataset_streams(u.dataset, c, m);
    std::istringstream ci(c.str()), mi(m.str());
    const Dataset parsed = parse_dataset_streams(ci, mi);
    CHECK(parsed == u.dataset);
    CHECK(parsed.total_messages() == u.dataset.total_messages());
}

TEST_CASE("generation is deterministic per seed") {
    UniverseSpec spec;
    spec.seed = 1212;
    spec.standard_channels = 8;
    spec.clone_originals = 2;
    spec.clone_pairs = 2;
    const Universe a = generate_universe(spec);
    const Universe b = generate_universe(spec);
    CHECK(a.dataset == b.dataset);

    spec.seed = 1213;
    const Universe c = generate_universe(spec);
    CHECK_FALSE(a.dataset == c.dataset);
}

TEST_CASE("scripted clones satisfy the detector predicate by construction") {
    UniverseSpec spec;
    spec.seed = 404;
    spec.standard_channels = 6;
    spec.clone_originals = 5;
    spec.clone_pairs = 10;
    const Universe u = generate_universe(spec);
    REQUIRE(u.truth.clone_pairs.size() == 10);

    const CloneReport report = find_clones(u.dataset);
    std::set<std::pair<std::int64_t, std::int64_t>> got;
    for (const CloneEntry& e : report.entries) got.emplace(e.original_id, e.clone_id);
    // no false negatives
    for (const auto& pair : u.truth.clone_pairs) CHECK(got.count(pair) == 1);
    // and with the default spec, exact equality
    CHECK(got.size() == u.truth.clone_pairs.size());
}

TEST_CASE("conspiracy network is recovered by community detection") {
    UniverseSpec spec;
    spec.seed = 88;
    spec.standard_channels = 20;
    spec.standard_forward_prob = 0.15;
    spec.conspiracy_channels = 25;
    spec.conspiracy_fakes = 5;
    spec.conspiracy_distinct_messages = 120;
    const Universe u = generate_universe(spec);

    const ForwardGraph g = build_forward_graph(u.dataset).graph;
    const CommunityAssignment assignment = leiden(g, 1.0, 5);

    std::vector<std::int64_t> anchors;
    for (const auto& [id, role] : u.truth.role) {
        if (role == "conspiracy_fake") anchors.push_back(id);
    }
    REQUIRE(anchors.size() == 5);
    const CommunitySelection sel = community_of(g, assignment, anchors);
    CHECK_FALSE(sel.spans_multiple);

    std::vector<std::int64_t> want = u.truth.conspiracy_members;
    std::sort(want.begin(), want.end());
    CHECK(sel.channel_ids == want);
}

TEST_CASE("infeasible specs are rejected") {
    UniverseSpec spec;
    spec.clone_pairs = 3;
    spec.clone_originals = 0;
    CHECK_THROWS_AS(generate_universe(spec), std::invalid_argument);

    UniverseSpec tiny;
    tiny.conspiracy_channels = 2;
    CHECK_THROWS_AS(generate_universe(tiny), std::invalid_argument);

    UniverseSpec starved;
    starved.conspiracy_channels = 30;
    starved.conspiracy_distinct_messages = 10;  // fewer than one per member
    CHECK_THROWS_AS(generate_universe(starved), std::invalid_argument);
}

TEST_CASE("spec file round trip") {
    UniverseSpec spec;
    spec.seed = 9;
    spec.standard_channels = 17;
    spec.official_link_mean = 1234.5;
    spec.conspiracy_channels = 12;

    std::ostringstream out;
    spec.serialize(out);
    std::istringstream in(out.str());
    const UniverseSpec parsed = UniverseSpec::parse(in);
    CHECK(parsed.seed == 9);
    CHECK(parsed.standard_channels == 17);
    CHECK(parsed.official_link_mean == doctest::Approx(1234.5));
    CHECK(parsed.conspiracy_channels == 12);

    std::istringstream bad("unknown_key = 4\n");
    CHECK_THROWS_AS(UniverseSpec::parse(bad), ParseError);
    std::istringstream malformed("just words\n");
    CHECK_THROWS_AS(UniverseSpec::parse(malformed), ParseError);
}

TEST_CASE("ground truth file round trip") {
    UniverseSpec spec;
    spec.seed = 3;
    spec.standard_channels = 4;
    spec.clone_originals = 1;
    spec.clone_pairs = 1;
    spec.conspiracy_channels = 8;
    spec.conspiracy_distinct_messages = 40;
    const Universe u = generate_universe(spec);

    const std::string path = "/tmp/chanalyze_truth_test.csv";
    u.truth.save(path);
    const GroundTruth loaded = GroundTruth::load(path);
    CHECK(loaded.role == u.truth.role);
    CHECK(loaded.clone_pairs == u.truth.clone_pairs);
    CHECK(loaded.conspiracy_members == u.truth.conspiracy_members);
    CHECK(loaded.core_channel == u.truth.core_channel);
    CHECK(loaded.scripted_first_within_10min ==
          doctest::Approx(u.truth.scripted_first_within_10min).epsilon(1e-12));
}

TEST_CASE("crawl fixtures") {
    SUBCASE("no forwards: crawl is exactly the seeds") {
        std::vector<ChannelRecord> channels = {make_channel(1), make_channel(2)};
        std::vector<MessageRecord> msgs = {make_text(1, 1, 100, "a"), make_text(2, 1, 100, "b")};
        const Dataset ds = build_dataset(channels, msgs);
        const CrawlReport r = simulate_crawl(ds, {1});
        CHECK(r.crawled_ids == std::vector<std::int64_t>{1});
        CHECK(r.iterations.size() == 1);
        CHECK(r.iterations[0].new_channels == 0);
        CHECK(r.iterations[0].fully_explored_fraction == doctest::Approx(1.0));
    }

    SUBCASE("chain is discovered one hop per iteration") {
        std::vector<ChannelRecord> channels = {make_channel(1), make_channel(2), make_channel(3)};
        std::vector<MessageRecord> msgs = {
            with_fwd(make_text(1, 1, 100, "from b"), 2, 50),
            with_fwd(make_text(2, 1, 100, "from c"), 3, 50),
            make_text(3, 1, 100, "own"),
        };
        const Dataset ds = build_dataset(channels, msgs);
        const CrawlReport r = simulate_crawl(ds, {1});
        CHECK(r.crawled_ids == std::vector<std::int64_t>{1, 2, 3});
        REQUIRE(r.iterations.size() >= 2);
        CHECK(r.iterations[0].new_channels == 1);
        CHECK(r.iterations[1].new_channels == 1);
    }

    SUBCASE("window cap hides old origins") {
        std::vector<ChannelRecord> channels = {make_channel(1), make_channel(2)};
        std::vector<MessageRecord> msgs;
        // the forward is the OLDEST message; a window of 3 hides it
        msgs.push_back(with_fwd(make_text(1, 1, 50, "old forward"), 2, 10));
        for (int i = 0; i < 3; ++i) msgs.push_back(make_text(1, i + 2, 100 + i, "recent"));
        msgs.push_back(make_text(2, 1, 100, "own"));
        const Dataset ds = build_dataset(channels, msgs);

        CHECK(simulate_crawl(ds, {1}, 3).crawled_ids == std::vector<std::int64_t>{1});
        CHECK(simulate_crawl(ds, {1}, 10).crawled_ids == std::vector<std::int64_t>{1, 2});
    }

    SUBCASE("unknown seed is rejected") {
        const Dataset ds = build_dataset({make_channel(1)}, {});
        CHECK_THROWS_AS(simulate_crawl(ds, {404}), std::invalid_argument);
    }
}

TEST_CASE("crawl equals the reachability closure and grows monotonically") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        UniverseSpec spec;
        spec.seed = 5000 + seed;
        spec.standard_channels = 25;
        spec.standard_forward_prob = 0.15;
        const Universe u = generate_universe(spec);

        Rng rng(seed);
        std::vector<std::int64_t> seeds;
        for (int s = 0; s < 3; ++s) {
            seeds.push_back(
                u.dataset.channel(rng.uniform_int(u.dataset.channel_count())).id);
        }
        const std::size_t window = 1 + rng.uniform_int(40);

        const CrawlReport r = simulate_crawl(u.dataset, seeds, window);
        const std::set<std::int64_t> expected = crawl_closure(u.dataset, seeds, window);
        CHECK(r.crawled_ids == std::vector<std::int64_t>(expected.begin(), expected.end()));

        // monotone growth: cumulative size never decreases, final = closure
        std::size_t cumulative = std::set<std::int64_t>(seeds.begin(), seeds.end()).size();
        for (const auto& iter : r.iterations) cumulative += iter.new_channels;
        CHECK(cumulative == expected.size());
    }
}
