#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chanalyze/data_model.hpp"

namespace chanalyze {

// Ground-truthed universe generator. Every population parameter is scripted
// so detector outputs can be checked exactly against what was generated.
struct UniverseSpec {
    std::uint64_t seed = 42;
    std::int64_t base_time = 1'577'836'800;  // generation span start
    std::int64_t active_days = 360;

    std::size_t standard_channels = 30;
    std::size_t standard_messages_min = 30;
    std::size_t standard_messages_max = 80;
    double standard_forward_prob = 0.05;

    std::size_t official_channels = 0;
    std::size_t official_messages = 160;
    double official_link_mean = 2006.24;

    std::size_t fake_channels = 0;
    std::size_t fake_messages = 120;
    double fake_link_mean = 682.74;
    double fake_emoji_title_prob = 0.85;
    std::int64_t fake_activity_days = 45;

    std::size_t clone_originals = 0;
    std::size_t clone_pairs = 0;  // clones, assigned round-robin to originals
    std::size_t original_messages = 50;
    double clone_copy_fraction = 0.6;
    std::int64_t clone_delay_min_s = 3'600;
    std::int64_t clone_delay_max_s = 604'800;
    double clone_injection_rate = 0.2;  // injected own messages per copied one

    std::size_t conspiracy_channels = 0;  // includes one core channel
    std::size_t conspiracy_fakes = 11;    // members with fake-style titles
    std::size_t conspiracy_distinct_messages = 400;
    double conspiracy_first_within_10min = 0.95;
    double conspiracy_never_forwarded = 0.08;
    double conspiracy_non_english = 0.25;
    double conspiracy_german_members = 0.3;  // fraction of members marked "de"

    std::int64_t reference_time() const { return base_time + active_days * 86'400; }

    static UniverseSpec parse(std::istream& in, const std::string& name = "<spec>");
    static UniverseSpec parse_file(const std::string& path);
    void serialize(std::ostream& out) const;
};

struct GroundTruth {
    std::unordered_map<std::int64_t, std::string> role;
    std::vector<std::pair<std::int64_t, std::int64_t>> clone_pairs;  // (original, clone)
    std::vector<std::int64_t> conspiracy_members;  // includes the core
    std::int64_t core_channel = 0;                 // 0 = none
    double scripted_first_within_10min = 0;        // exact scripted fraction
    std::size_t scripted_never_forwarded = 0;

    void save(const std::string& path) const;
    static GroundTruth load(const std::string& path);
};

struct Universe {
    Dataset dataset;
    GroundTruth truth;
};

// Deterministic per seed; generated archives always pass parse_dataset
// validation. Throws std::invalid_argument on an infeasible spec.
Universe generate_universe(const UniverseSpec& spec);

// Restriction of a dataset to the given channels (all of their messages).
Dataset subset_dataset(const Dataset& ds, const std::vector<std::int64_t>& channel_ids);

struct CrawlReport {
    struct Iteration {
        std::size_t new_channels = 0;
        double fully_explored_fraction = 0;  // known channels adding nothing new
    };
    std::vector<Iteration> iterations;
    std::vector<std::int64_t> crawled_ids;  // sorted
    Dataset crawled;
};

// Snowball crawl: from the seed channels, repeatedly scan the last `window`
// messages of every known channel and add in-universe forward origins, until
// a fixed point or max_iterations.
CrawlReport simulate_crawl(const Dataset& universe, const std::vector<std::int64_t>& seeds,
                           std::size_t window = 10'000, std::size_t max_iterations = 100);

}  // namespace chanalyze
