#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chanalyze/clone.hpp"
#include "chanalyze/synth.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace chanalyze;
using namespace chanalyze::testing;

namespace {

const char* kSix = "one two three four five six";
const char* kFive = "one two three four five";

std::string numbered(const std::string& prefix, int i) {
    return prefix + " filler words to reach six tokens " + std::to_string(i);
}

}  // namespace

TEST_CASE("eligibility filter") {
    const std::vector<MessageRecord> msgs = {
        make_text(1, 1, 10, kFive),                          // too short
        make_text(1, 2, 11, kSix),                           // eligible
        with_fwd(make_text(1, 3, 12, numbered("fwd", 0)), 2, 5),  // forwarded
        make_text(1, 4, 13,
                  "This channel is unavailable due to copyright infringement claims"),  // service
        make_media(1, 5, 14),                                // media
        make_text(1, 6, 15, kSix),                           // duplicate, later
    };
    const EligibleSet set = eligible_messages(msgs);
    REQUIRE(set.size() == 1);
    CHECK(set.begin()->second == 11);  // earliest date kept
}

TEST_CASE("whitespace-only differences share a fingerprint") {
    const std::vector<MessageRecord> msgs = {
        make_text(1, 1, 20, "one two  three   four five six"),
        make_text(1, 2, 10, kSix),
    };
    const EligibleSet set = eligible_messages(msgs);
    REQUIRE(set.size() == 1);
    CHECK(set.begin()->second == 10);
}

TEST_CASE("copied_ratio at the threshold boundary") {
    // b has 10 eligible, 3 shared with a, all strictly later
    std::vector<MessageRecord> a_msgs, b_msgs;
    for (int i = 0; i < 3; ++i) {
        a_msgs.push_back(make_text(1, i + 1, 100 + i, numbered("shared", i)));
        b_msgs.push_back(make_text(2, i + 1, 200 + i, numbered("shared", i)));
    }
    for (int i = 0; i < 7; ++i) b_msgs.push_back(make_text(2, 10 + i, 150 + i, numbered("own", i)));

    const EligibleSet a = eligible_messages(a_msgs);
    const EligibleSet b = eligible_messages(b_msgs);
    const CopiedRatio r = copied_ratio(a, b);
    CHECK(r.ratio == doctest::Approx(0.30).epsilon(1e-12));
    CHECK(r.shared == 3);
    CHECK(r.all_later);

    CHECK_THROWS_AS(copied_ratio(a, EligibleSet{}), std::invalid_argument);
}

TEST_CASE("simultaneous posting disqualifies both orderings") {
    std::vector<MessageRecord> a_msgs, b_msgs;
    for (int i = 0; i < 4; ++i) {
        a_msgs.push_back(make_text(1, i + 1, 100 + i, numbered("dup", i)));
        b_msgs.push_back(make_text(2, i + 1, 100 + i, numbered("dup", i)));
    }
    const EligibleSet a = eligible_messages(a_msgs);
    const EligibleSet b = eligible_messages(b_msgs);
    CHECK_FALSE(copied_ratio(a, b).all_later);
    CHECK_FALSE(copied_ratio(b, a).all_later);
}

TEST_CASE("below-threshold sharing is not a clone") {
    std::vector<MessageRecord> a_msgs, b_msgs;
    for (int i = 0; i < 2; ++i) {
        a_msgs.push_back(make_text(1, i + 1, 100 + i, numbered("shared", i)));
        b_msgs.push_back(make_text(2, i + 1, 200 + i, numbered("shared", i)));
    }
    for (int i = 0; i < 8; ++i) b_msgs.push_back(make_text(2, 10 + i, 150 + i, numbered("own", i)));
    const CopiedRatio r = copied_ratio(eligible_messages(a_msgs), eligible_messages(b_msgs));
    CHECK(r.ratio == doctest::Approx(0.20));
}

TEST_CASE("find_clones on a scripted universe recovers exactly the scripted pairs") {
    UniverseSpec spec;
    spec.seed = 2027;
    spec.standard_channels = 15;
    spec.clone_originals = 5;
    spec.clone_pairs = 10;
    const Universe u = generate_universe(spec);

    const CloneReport report = find_clones(u.dataset, 0.30, 2);
    std::vector<std::pair<std::int64_t, std::int64_t>> got;
    for (const CloneEntry& e : report.entries) got.emplace_back(e.original_id, e.clone_id);
    std::vector<std::pair<std::int64_t, std::int64_t>> want = u.truth.clone_pairs;
    std::sort(want.begin(), want.end());
    CHECK(got == want);

    // one perfect and one titled clone per original
    std::size_t perfect = 0, titled = 0;
    for (const CloneEntry& e : report.entries) {
        if (e.kind == CloneKind::perfect) ++perfect;
        if (e.kind == CloneKind::titled) ++titled;
    }
    CHECK(perfect == 5);
    CHECK(titled == 5);
}

TEST_CASE("two channels sharing only forwarded messages are not clones") {
    auto a = make_channel(1, "A");
    auto b = make_channel(2, "B");
    auto c = make_channel(3, "C");
    std::vector<MessageRecord> msgs;
    for (int i = 0; i < 10; ++i) {
        msgs.push_back(with_fwd(make_text(1, i + 1, 100 + i, numbered("viral", i)), 3, 50));
        msgs.push_back(with_fwd(make_text(2, i + 1, 200 + i, numbered("viral", i)), 3, 50));
    }
    const Dataset ds = build_dataset({a, b, c}, msgs);
    CHECK(find_clones(ds).entries.empty());
}

namespace {

Dataset random_corpus(Rng& rng) {
    const std::size_t n_channels = 3 + rng.uniform_int(17);
    std::vector<ChannelRecord> channels;
    std::vector<MessageRecord> msgs;
    // small text pool so channels overlap heavily by chance
    for (std::size_t c = 0; c < n_channels; ++c) {
        channels.push_back(make_channel(static_cast<std::int64_t>(c + 1)));
        const std::size_t n_msgs = rng.uniform_int(200);
        for (std::size_t k = 0; k < n_msgs; ++k) {
            const std::int64_t date = 1000 + static_cast<std::int64_t>(rng.uniform_int(5000));
            const int text_pick = static_cast<int>(rng.uniform_int(60));
            MessageRecord m = make_text(static_cast<std::int64_t>(c + 1),
                                        static_cast<std::int64_t>(k + 1), date,
                                        numbered("pool", text_pick));
            if (rng.bernoulli(0.1)) {
                m = with_fwd(std::move(m), static_cast<std::int64_t>(rng.uniform_int(n_channels)) + 1,
                             date - 10);
            }
            msgs.push_back(std::move(m));
        }
    }
    return build_dataset(std::move(channels), msgs);
}

}  // namespace

TEST_CASE("index path equals the exhaustive pairwise oracle") {
    Rng rng(606);
    for (int trial = 0; trial < 12; ++trial) {
        const Dataset ds = random_corpus(rng);
        const CloneReport fast = find_clones(ds, 0.30, 2);
        const std::vector<CloneEntry> slow = oracle::clone_scan_pairwise(ds, 0.30);
        REQUIRE(fast.entries.size() == slow.size());
        for (std::size_t i = 0; i < slow.size(); ++i) {
            CHECK(fast.entries[i].original_id == slow[i].original_id);
            CHECK(fast.entries[i].clone_id == slow[i].clone_id);
            CHECK(fast.entries[i].shared == slow[i].shared);
            CHECK(fast.entries[i].eligible == slow[i].eligible);
            CHECK(fast.entries[i].ratio == slow[i].ratio);
        }
        // never self, never violating the date order
        for (const CloneEntry& e : fast.entries) CHECK(e.original_id != e.clone_id);

        // worker count does not change the report
        const CloneReport single = find_clones(ds, 0.30, 1);
        REQUIRE(single.entries.size() == fast.entries.size());
        for (std::size_t i = 0; i < single.entries.size(); ++i) {
            CHECK(single.entries[i].ratio == fast.entries[i].ratio);
        }
    }
}

TEST_CASE("copied ratio cdf") {
    SUBCASE("no shared content is a step at zero") {
        std::vector<ChannelRecord> channels;
        std::vector<MessageRecord> msgs;
        for (int c = 1; c <= 5; ++c) {
            channels.push_back(make_channel(c));
            msgs.push_back(make_text(c, 1, 100, numbered("unique channel", c)));
        }
        const CopiedRatioCdf cdf = copied_ratio_cdf(build_dataset(channels, msgs));
        REQUIRE(cdf.cdf.points.size() == 1);
        CHECK(cdf.cdf.points[0] == std::pair<double, double>{0.0, 1.0});
    }

    SUBCASE("one clone at ratio 0.5 among nine clean channels") {
        std::vector<ChannelRecord> channels;
        std::vector<MessageRecord> msgs;
        // original: 10 eligible messages
        channels.push_back(make_channel(1));
        for (int i = 0; i < 10; ++i) msgs.push_back(make_text(1, i + 1, 100 + i, numbered("orig", i)));
        // clone: copies 3 of them later, plus 3 own -> 3/6 = 0.5
        channels.push_back(make_channel(2));
        for (int i = 0; i < 3; ++i) msgs.push_back(make_text(2, i + 1, 500 + i, numbered("orig", i)));
        for (int i = 0; i < 3; ++i) msgs.push_back(make_text(2, 10 + i, 400 + i, numbered("clone own", i)));
        // 8 unrelated channels
        for (int c = 3; c <= 10; ++c) {
            channels.push_back(make_channel(c));
            msgs.push_back(make_text(c, 1, 100, numbered("unrelated channel", c)));
        }
        const CopiedRatioCdf cdf = copied_ratio_cdf(build_dataset(channels, msgs));
        REQUIRE(cdf.cdf.points.size() == 2);
        CHECK(cdf.cdf.points[0] == std::pair<double, double>{0.0, 0.9});
        CHECK(cdf.cdf.points[1] == std::pair<double, double>{0.5, 1.0});
    }
}
