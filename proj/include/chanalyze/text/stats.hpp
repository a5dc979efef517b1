#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Codepoint- and token-level counters shared by the feature extractor, the
// topic preprocessor, and the clone eligibility filter.

namespace chanalyze::text {

// Emoji = codepoints in the configured ranges:
// U+1F300-1F5FF, U+1F600-1F64F, U+1F680-1F6FF, U+1F900-1F9FF,
// U+2600-27BF, U+1F1E6-1F1FF (regional indicators).
bool is_emoji_cp(std::uint32_t cp);
std::size_t count_emojis(std::string_view s);

// Letters/digits beyond ASCII are recognized by script range (Latin,
// Cyrillic, Greek, Arabic, Hebrew, Devanagari). Whitespace counts as
// neither alphanumeric nor non-alphanumeric.
bool is_alnum_cp(std::uint32_t cp);
std::size_t count_non_alnum(std::string_view s);

// Whitespace-delimited tokens.
std::size_t count_words(std::string_view s);
std::vector<std::string_view> split_words(std::string_view s);

// A token is a link when it starts with http:// or https:// or contains
// t.me/ (case-insensitive).
bool is_link_token(std::string_view token);
std::size_t count_links(std::string_view s);

std::string ascii_lower(std::string_view s);

// Case-folded whole-word containment; word boundaries are non-alphanumeric
// codepoints.
bool contains_word(std::string_view haystack, std::string_view lowered_needle);

// Unit-cost insert/delete/substitute distance over codepoints.
std::size_t levenshtein(std::string_view a, std::string_view b);

}  // namespace chanalyze::text
