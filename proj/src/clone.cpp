#include "chanalyze/clone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chanalyze/text/normalize.hpp"
#include "chanalyze/text/stats.hpp"
#include "chanalyze/util/threading.hpp"

namespace chanalyze {

EligibleSet eligible_messages(const std::vector<MessageRecord>& messages,
                              const text::ViolatedTermsMatcher& matcher) {
    EligibleSet out;
    for (const MessageRecord& m : messages) {
        if (!m.is_text() || m.is_forwarded()) continue;
        const std::string norm = text::normalize_text(m.text);
        if (text::count_words(norm) < 6) continue;  // "longer than 5 words"
        if (matcher.matches(norm)) continue;
        const text::ContentFingerprint fp = text::fingerprint(norm);
        const auto [it, inserted] = out.try_emplace(fp, m.date);
        if (!inserted && m.date < it->second) it->second = m.date;
    }
    return out;
}

CopiedRatio copied_ratio(const EligibleSet& a, const EligibleSet& b) {
    if (b.empty()) throw std::invalid_argument("copied_ratio: channel b has no eligible messages");
    CopiedRatio r;
    r.all_later = true;
    for (const auto& [fp, b_date] : b) {
        const auto it = a.find(fp);
        if (it == a.end()) continue;
        ++r.shared;
        if (b_date <= it->second) r.all_later = false;
    }
    if (r.shared == 0) r.all_later = false;
    r.ratio = static_cast<double>(r.shared) / static_cast<double>(b.size());
    return r;
}

std::string to_string(CloneKind k) {
    switch (k) {
        case CloneKind::perfect: return "perfect";
        case CloneKind::titled: return "titled";
        default: return "plain";
    }
}

namespace {

struct PairSharing {
    // key: (a_index << 32) | b_index for a != b; value: shared fingerprints
    // and whether every shared message is strictly later in b.
    std::unordered_map<std::uint64_t, std::pair<std::size_t, bool>> shared;
};

// Accumulates shared fingerprint counts between same-language channels via
// an inverted index over fingerprints.
PairSharing shared_counts(const Dataset& ds, const std::vector<std::string>& langs,
                          const std::vector<EligibleSet>& eligible) {
    struct Occurrence {
        std::uint32_t channel;
        std::int64_t date;
    };
    std::unordered_map<text::ContentFingerprint, std::vector<Occurrence>, text::FingerprintHash>
        index;
    for (std::uint32_t i = 0; i < ds.channel_count(); ++i) {
        for (const auto& [fp, date] : eligible[i]) index[fp].push_back({i, date});
    }

    PairSharing ps;
    for (auto& [fp, occs] : index) {
        if (occs.size() < 2) continue;
        std::sort(occs.begin(), occs.end(),
                  [](const Occurrence& x, const Occurrence& y) { return x.channel < y.channel; });
        for (const Occurrence& a : occs) {
            for (const Occurrence& b : occs) {
                if (a.channel == b.channel) continue;
                if (langs[a.channel] != langs[b.channel]) continue;
                auto& entry =
                    ps.shared[(static_cast<std::uint64_t>(a.channel) << 32) | b.channel];
                if (entry.first == 0) entry.second = true;
                ++entry.first;
                if (b.date <= a.date) entry.second = false;
            }
        }
    }
    return ps;
}

std::vector<std::string> channel_languages(const Dataset& ds, unsigned threads) {
    std::vector<std::string> langs(ds.channel_count());
    parallel_for(ds.channel_count(), threads,
                 [&](std::size_t i) { langs[i] = channel_language(ds, i); });
    return langs;
}

std::vector<EligibleSet> all_eligible(const Dataset& ds, unsigned threads) {
    std::vector<EligibleSet> eligible(ds.channel_count());
    parallel_for(ds.channel_count(), threads,
                 [&](std::size_t i) { eligible[i] = eligible_messages(ds.messages(i)); });
    return eligible;
}

}  // namespace

CloneReport find_clones(const Dataset& ds, double threshold, unsigned threads) {
    CloneReport report;
    report.threshold = threshold;

    const std::vector<std::string> langs = channel_languages(ds, threads);
    const std::vector<EligibleSet> eligible = all_eligible(ds, threads);
    const PairSharing ps = shared_counts(ds, langs, eligible);

    for (const auto& [key, entry] : ps.shared) {
        const auto a = static_cast<std::uint32_t>(key >> 32);
        const auto b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        const auto [shared, all_later] = entry;
        const std::size_t b_eligible = eligible[b].size();
        const double ratio = static_cast<double>(shared) / static_cast<double>(b_eligible);
        if (!all_later || ratio < threshold) continue;

        const ChannelRecord& ca = ds.channel(a);
        const ChannelRecord& cb = ds.channel(b);
        CloneEntry e;
        e.original_id = ca.id;
        e.clone_id = cb.id;
        e.shared = shared;
        e.eligible = b_eligible;
        e.ratio = ratio;
        e.at_threshold = ratio == threshold;
        if (ca.title == cb.title && ca.description == cb.description) {
            e.kind = CloneKind::perfect;
        } else if (text::levenshtein(ca.title, cb.title) < 3) {
            e.kind = CloneKind::titled;
        } else {
            e.kind = CloneKind::plain;
        }
        report.entries.push_back(e);
    }

    std::sort(report.entries.begin(), report.entries.end(),
              [](const CloneEntry& x, const CloneEntry& y) {
                  return x.original_id != y.original_id ? x.original_id < y.original_id
                                                        : x.clone_id < y.clone_id;
              });
    return report;
}

CopiedRatioCdf copied_ratio_cdf(const Dataset& ds, unsigned threads) {
    const std::vector<std::string> langs = channel_languages(ds, threads);
    const std::vector<EligibleSet> eligible = all_eligible(ds, threads);
    const PairSharing ps = shared_counts(ds, langs, eligible);

    std::vector<double> max_ratio(ds.channel_count(), 0.0);
    for (const auto& [key, entry] : ps.shared) {
        const auto b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        const auto [shared, all_later] = entry;
        if (!all_later) continue;  // nothing provably copied
        const double ratio =
            static_cast<double>(shared) / static_cast<double>(eligible[b].size());
        max_ratio[b] = std::max(max_ratio[b], ratio);
    }

    CopiedRatioCdf out;
    out.per_channel.reserve(ds.channel_count());
    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        out.per_channel.emplace_back(ds.channel(i).id, max_ratio[i]);
    }
    out.cdf = empirical_cdf(std::vector<double>(max_ratio.begin(), max_ratio.end()));
    return out;
}

}  // namespace chanalyze
