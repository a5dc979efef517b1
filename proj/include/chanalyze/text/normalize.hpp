#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace chanalyze::text {

// Canonical composition (NFC) over UTF-8 input. Tables generated from the
// Unicode character database; Hangul handled algorithmically.
std::string nfc(std::string_view raw);

bool is_whitespace_cp(std::uint32_t cp);

// NFC, strip leading/trailing whitespace, collapse internal whitespace runs
// to a single space. Case is preserved. Idempotent.
std::string normalize_text(std::string_view raw);

}  // namespace chanalyze::text
