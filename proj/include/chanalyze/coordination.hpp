#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "chanalyze/data_model.hpp"
#include "chanalyze/graph.hpp"
#include "chanalyze/text/fingerprint.hpp"

namespace chanalyze {

struct ReuseReport {
    std::size_t total_messages = 0;  // text messages across the channel set
    std::size_t distinct = 0;        // distinct fingerprints
    struct Entry {
        text::ContentFingerprint fp;
        std::size_t count = 0;
        std::string sample;  // one normalized text for inspection
    };
    std::vector<Entry> top;           // sorted by count desc, fp asc
    std::vector<std::size_t> counts;  // all occurrence counts; sums to total
};

// Content reuse across a channel set; forwarded messages included.
ReuseReport message_reuse(const Dataset& ds, const std::vector<std::size_t>& channel_indices,
                          std::size_t top_k = 10);

struct DelayProfile {
    struct MessageDelays {
        text::ContentFingerprint fp;
        std::int64_t origin_date = 0;   // earliest observed occurrence
        double first = 0, mean = 0, last = 0;  // seconds
        std::size_t occurrences = 0;
    };
    std::vector<MessageDelays> messages;  // fingerprints with >= 2 occurrences
    Cdf first_cdf, mean_cdf, last_cdf;
    double frac_first_within_10min = 0;  // first-forward delay <= 600 s
    double frac_last_within_24h = 0;     // last delay <= 86,400 s
    // occurrences whose forward metadata claims an origin earlier than the
    // earliest observed occurrence
    std::size_t metadata_discrepancies = 0;
};

DelayProfile forwarding_delays(const Dataset& ds, const std::vector<std::size_t>& channel_indices);

inline constexpr std::size_t kCoverageBands = 6;  // never, (0,20%], ..., (80,100%]

struct CoverageReport {
    std::size_t channel_count = 0;
    struct Row {
        text::ContentFingerprint fp;
        std::size_t channels = 0;
        double coverage = 0;          // channels containing it / |set|
        bool never_forwarded = false;  // single occurrence overall
    };
    std::vector<Row> rows;  // sorted by coverage desc, fp asc
    std::array<std::size_t, kCoverageBands> bands{};  // counts sum to distinct
};

CoverageReport network_coverage(const Dataset& ds, const std::vector<std::size_t>& channel_indices);

struct CoreChannelReport {
    struct Core {
        std::int64_t channel_id = 0;
        std::size_t in_degree = 0;
        std::size_t out_degree = 0;
    };
    std::vector<Core> core;  // out-degree 0, in-degree >= threshold
    Condensation condensation;
    std::size_t subgraph_nodes = 0;
};

// g must already be restricted to the channel set (ForwardGraph::restricted_to).
CoreChannelReport find_core_channels(const ForwardGraph& g, double min_in_coverage = 0.5);

}  // namespace chanalyze
