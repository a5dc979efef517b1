#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace chanalyze::text {

// 128-bit digest of normalized message text. With a 128-bit state, a corpus
// would need ~2^64 distinct messages before collisions become likely
// (birthday bound), so equality of fingerprints is treated as equality of
// normalized text.
struct ContentFingerprint {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    friend bool operator==(const ContentFingerprint&, const ContentFingerprint&) = default;
    friend auto operator<=>(const ContentFingerprint&, const ContentFingerprint&) = default;

    std::string hex() const;
};

// Input must already be normalized (see text::normalize_text). Stable across
// runs and platforms.
ContentFingerprint fingerprint(std::string_view normalized);

struct FingerprintHash {
    std::size_t operator()(const ContentFingerprint& f) const noexcept {
        return static_cast<std::size_t>(f.hi ^ (f.lo * 0x9E3779B97F4A7C15ULL));
    }
};

}  // namespace chanalyze::text
