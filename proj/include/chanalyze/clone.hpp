#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "chanalyze/data_model.hpp"
#include "chanalyze/text/fingerprint.hpp"
#include "chanalyze/text/language.hpp"

namespace chanalyze {

// Distinct eligible fingerprints of a channel with the earliest posting
// date of each. Eligible = own (non-forwarded) text message of at least six
// whitespace tokens that is not a service message.
using EligibleSet =
    std::unordered_map<text::ContentFingerprint, std::int64_t, text::FingerprintHash>;

EligibleSet eligible_messages(const std::vector<MessageRecord>& messages,
                              const text::ViolatedTermsMatcher& matcher =
                                  text::ViolatedTermsMatcher::with_defaults());

struct CopiedRatio {
    double ratio = 0.0;      // |shared| / |eligible(b)|
    std::size_t shared = 0;
    bool all_later = false;  // every shared message appears strictly later in b
};

// How much of b is identical to content in a. Throws when b has no eligible
// messages.
CopiedRatio copied_ratio(const EligibleSet& a, const EligibleSet& b);

enum class CloneKind { perfect, titled, plain };

std::string to_string(CloneKind k);

struct CloneEntry {
    std::int64_t original_id = 0;
    std::int64_t clone_id = 0;
    std::size_t shared = 0;
    std::size_t eligible = 0;  // clone's eligible distinct messages
    double ratio = 0.0;
    CloneKind kind = CloneKind::plain;
    bool at_threshold = false;  // ratio exactly at the configured threshold
};

struct CloneReport {
    std::vector<CloneEntry> entries;  // sorted by (original_id, clone_id)
    double threshold = 0.30;
};

// B is a clone of A iff same language, ratio >= threshold and every shared
// message is strictly later in B. Candidate pairs come from an inverted
// fingerprint index; the result equals an exhaustive pairwise scan.
CloneReport find_clones(const Dataset& ds, double threshold = 0.30, unsigned threads = 1);

struct CopiedRatioCdf {
    std::vector<std::pair<std::int64_t, double>> per_channel;  // (channel id, max copied ratio)
    Cdf cdf;
};

// Per channel, the maximum date-qualified copied ratio against any
// same-language channel (0 when nothing was provably copied).
CopiedRatioCdf copied_ratio_cdf(const Dataset& ds, unsigned threads = 1);

}  // namespace chanalyze
