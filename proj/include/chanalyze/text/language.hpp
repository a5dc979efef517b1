#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace chanalyze::text {

// Stopword-profile + script classifier over {en, ru, de, fa, hi, ar, it,
// bg, et, id, mr}. Returns "und" below the 20-token floor or when no
// language wins more than half of the per-message votes.
std::string detect_language(const std::vector<std::string_view>& message_texts);

// Single-message classification, exposed for tests. Empty string = no vote.
std::string classify_message_language(std::string_view text);

// Service-message detector. Each pattern is a conjunction of case-folded
// substrings; a text matches when every substring of some pattern occurs.
struct ViolatedTermsMatcher {
    std::vector<std::vector<std::string>> patterns;

    static ViolatedTermsMatcher with_defaults();
    bool matches(std::string_view text) const;
};

bool is_violated_terms(std::string_view text);

}  // namespace chanalyze::text
