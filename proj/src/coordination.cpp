#include "chanalyze/coordination.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "chanalyze/text/normalize.hpp"

namespace chanalyze {

namespace {

struct Occurrence {
    std::int64_t date;
    std::size_t channel_idx;
    std::int64_t claimed_origin_date;  // fwd.from_date, or the message date
};

using FpOccurrences =
    std::unordered_map<text::ContentFingerprint, std::vector<Occurrence>, text::FingerprintHash>;

FpOccurrences collect(const Dataset& ds, const std::vector<std::size_t>& channel_indices,
                      std::unordered_map<text::ContentFingerprint, std::string,
                                         text::FingerprintHash>* samples = nullptr) {
    if (channel_indices.empty()) throw std::invalid_argument("empty channel set");
    FpOccurrences occs;
    for (const std::size_t idx : channel_indices) {
        for (const MessageRecord& m : ds.messages(idx)) {
            if (!m.is_text()) continue;
            const std::string norm = text::normalize_text(m.text);
            const text::ContentFingerprint fp = text::fingerprint(norm);
            auto& list = occs[fp];
            list.push_back({m.date, idx, m.fwd ? m.fwd->from_date : m.date});
            if (samples && list.size() == 1) (*samples)[fp] = norm;
        }
    }
    return occs;
}

}  // namespace

ReuseReport message_reuse(const Dataset& ds, const std::vector<std::size_t>& channel_indices,
                          std::size_t top_k) {
    std::unordered_map<text::ContentFingerprint, std::string, text::FingerprintHash> samples;
    const FpOccurrences occs = collect(ds, channel_indices, &samples);

    ReuseReport report;
    report.distinct = occs.size();
    std::vector<ReuseReport::Entry> entries;
    entries.reserve(occs.size());
    for (const auto& [fp, list] : occs) {
        report.total_messages += list.size();
        report.counts.push_back(list.size());
        entries.push_back({fp, list.size(), samples[fp]});
    }
    std::sort(report.counts.begin(), report.counts.end(), std::greater<>());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.count != b.count ? a.count > b.count : a.fp < b.fp;
    });
    if (entries.size() > top_k) entries.resize(top_k);
    report.top = std::move(entries);
    return report;
}

DelayProfile forwarding_delays(const Dataset& ds,
                               const std::vector<std::size_t>& channel_indices) {
    const FpOccurrences occs = collect(ds, channel_indices);

    DelayProfile profile;
    std::vector<double> firsts, means, lasts;
    for (const auto& [fp, list] : occs) {
        std::int64_t origin = list.front().date;
        for (const Occurrence& o : list) origin = std::min(origin, o.date);
        for (const Occurrence& o : list) {
            if (o.claimed_origin_date < origin) ++profile.metadata_discrepancies;
        }
        if (list.size() < 2) continue;

        DelayProfile::MessageDelays md;
        md.fp = fp;
        md.origin_date = origin;
        md.occurrences = list.size();

        // One occurrence at the origin date is the original; every other
        // occurrence is a forward (ties at the origin date count as
        // zero-delay forwards).
        double sum = 0, first = 0, last = 0;
        bool origin_consumed = false, first_set = false;
        std::size_t forwards = 0;
        for (const Occurrence& o : list) {
            if (!origin_consumed && o.date == origin) {
                origin_consumed = true;
                continue;
            }
            const double delay = static_cast<double>(o.date - origin);
            sum += delay;
            last = std::max(last, delay);
            if (!first_set || delay < first) {
                first = delay;
                first_set = true;
            }
            ++forwards;
        }
        md.first = first;
        md.last = last;
        md.mean = sum / static_cast<double>(forwards);
        profile.messages.push_back(md);
        firsts.push_back(md.first);
        means.push_back(md.mean);
        lasts.push_back(md.last);
    }

    std::sort(profile.messages.begin(), profile.messages.end(),
              [](const auto& a, const auto& b) { return a.fp < b.fp; });

    const double n = static_cast<double>(profile.messages.size());
    if (n > 0) {
        std::size_t within_10min = 0, within_24h = 0;
        for (const auto& md : profile.messages) {
            if (md.first <= 600.0) ++within_10min;
            if (md.last <= 86'400.0) ++within_24h;
        }
        profile.frac_first_within_10min = static_cast<double>(within_10min) / n;
        profile.frac_last_within_24h = static_cast<double>(within_24h) / n;
    }
    profile.first_cdf = empirical_cdf(std::move(firsts));
    profile.mean_cdf = empirical_cdf(std::move(means));
    profile.last_cdf = empirical_cdf(std::move(lasts));
    return profile;
}

CoverageReport network_coverage(const Dataset& ds,
                                const std::vector<std::size_t>& channel_indices) {
    const FpOccurrences occs = collect(ds, channel_indices);

    CoverageReport report;
    report.channel_count = channel_indices.size();
    const double n = static_cast<double>(report.channel_count);

    for (const auto& [fp, list] : occs) {
        CoverageReport::Row row;
        row.fp = fp;
        std::vector<std::size_t> channels;
        for (const Occurrence& o : list) channels.push_back(o.channel_idx);
        std::sort(channels.begin(), channels.end());
        channels.erase(std::unique(channels.begin(), channels.end()), channels.end());
        row.channels = channels.size();
        row.coverage = static_cast<double>(row.channels) / n;
        row.never_forwarded = list.size() == 1;
        report.rows.push_back(row);

        if (row.never_forwarded) {
            ++report.bands[0];
        } else {
            // (0,20%], (20,40%], (40,60%], (60,80%], (80,100%]
            std::size_t band = 1;
            for (double limit = 0.2; band < kCoverageBands - 1 && row.coverage > limit;
                 limit += 0.2) {
                ++band;
            }
            ++report.bands[band];
        }
    }
    std::sort(report.rows.begin(), report.rows.end(), [](const auto& a, const auto& b) {
        return a.coverage != b.coverage ? a.coverage > b.coverage : a.fp < b.fp;
    });
    return report;
}

CoreChannelReport find_core_channels(const ForwardGraph& g, double min_in_coverage) {
    if (g.size() == 0) throw std::invalid_argument("find_core_channels: empty subgraph");
    CoreChannelReport report;
    report.subgraph_nodes = g.size();
    report.condensation = strongly_connected_components(g);

    const double required = min_in_coverage * static_cast<double>(g.size() - 1);
    for (std::size_t u = 0; u < g.size(); ++u) {
        if (g.out_degree(u) != 0) continue;  // a core channel never forwards
        if (static_cast<double>(g.in_degree(u)) >= required) {
            report.core.push_back({g.node_id(u), g.in_degree(u), g.out_degree(u)});
        }
    }
    std::sort(report.core.begin(), report.core.end(),
              [](const auto& a, const auto& b) { return a.channel_id < b.channel_id; });
    return report;
}

}  // namespace chanalyze
