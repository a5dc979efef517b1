#include "chanalyze/text/normalize.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "chanalyze/text/utf8.hpp"

namespace chanalyze::text {

namespace {

struct CccEntry {
    std::uint32_t cp;
    std::uint8_t ccc;
};
struct DecompEntry {
    std::uint32_t cp;
    std::uint32_t first;
    std::uint32_t second;  // 0 for singleton decompositions
};
struct CompEntry {
    std::uint64_t key;  // (first << 32) | second
    std::uint32_t composite;
};

#include "nfc_tables.inc"

constexpr std::uint32_t kSBase = 0xAC00, kLBase = 0x1100, kVBase = 0x1161, kTBase = 0x11A7;
constexpr std::uint32_t kLCount = 19, kVCount = 21, kTCount = 28;
constexpr std::uint32_t kNCount = kVCount * kTCount;
constexpr std::uint32_t kSCount = kLCount * kNCount;

std::uint8_t combining_class(std::uint32_t cp) {
    const auto* end = kCccTable + std::size(kCccTable);
    const auto* it = std::lower_bound(kCccTable, end, cp,
                                      [](const CccEntry& e, std::uint32_t c) { return e.cp < c; });
    return (it != end && it->cp == cp) ? it->ccc : 0;
}

const DecompEntry* find_decomposition(std::uint32_t cp) {
    const auto* end = kDecompTable + std::size(kDecompTable);
    const auto* it = std::lower_bound(
        kDecompTable, end, cp, [](const DecompEntry& e, std::uint32_t c) { return e.cp < c; });
    return (it != end && it->cp == cp) ? it : nullptr;
}

std::uint32_t compose_pair(std::uint32_t a, std::uint32_t b) {
    // Hangul LV / LVT
    if (a >= kLBase && a < kLBase + kLCount && b >= kVBase && b < kVBase + kVCount) {
        return kSBase + ((a - kLBase) * kVCount + (b - kVBase)) * kTCount;
    }
    if (a >= kSBase && a < kSBase + kSCount && (a - kSBase) % kTCount == 0 && b > kTBase &&
        b < kTBase + kTCount) {
        return a + (b - kTBase);
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    const auto* end = kCompTable + std::size(kCompTable);
    const auto* it = std::lower_bound(kCompTable, end, key,
                                      [](const CompEntry& e, std::uint64_t k) { return e.key < k; });
    return (it != end && it->key == key) ? it->composite : 0;
}

void decompose_into(std::uint32_t cp, std::vector<std::uint32_t>& out) {
    if (cp >= kSBase && cp < kSBase + kSCount) {
        const std::uint32_t idx = cp - kSBase;
        out.push_back(kLBase + idx / kNCount);
        out.push_back(kVBase + (idx % kNCount) / kTCount);
        if (idx % kTCount != 0) out.push_back(kTBase + idx % kTCount);
        return;
    }
    if (const DecompEntry* d = find_decomposition(cp)) {
        decompose_into(d->first, out);
        if (d->second != 0) decompose_into(d->second, out);
        return;
    }
    out.push_back(cp);
}

// Canonical ordering: bubble nonzero-ccc codepoints into nondecreasing ccc
// order within each combining run (stable).
void canonical_order(std::vector<std::uint32_t>& cps) {
    for (std::size_t i = 1; i < cps.size(); ++i) {
        const std::uint8_t ccc = combining_class(cps[i]);
        if (ccc == 0) continue;
        std::size_t j = i;
        while (j > 0) {
            const std::uint8_t prev = combining_class(cps[j - 1]);
            if (prev == 0 || prev <= ccc) break;
            std::swap(cps[j - 1], cps[j]);
            --j;
        }
    }
}

void compose(std::vector<std::uint32_t>& cps) {
    if (cps.empty()) return;
    std::vector<std::uint32_t> out;
    out.reserve(cps.size());
    std::ptrdiff_t last_starter = -1;
    int last_starter_ccc = -1;  // highest ccc seen since the starter
    for (const std::uint32_t cp : cps) {
        const std::uint8_t ccc = combining_class(cp);
        if (last_starter >= 0) {
            const bool blocked = last_starter_ccc >= static_cast<int>(ccc) && last_starter_ccc > 0;
            if (!blocked) {
                if (const std::uint32_t comp =
                        compose_pair(out[static_cast<std::size_t>(last_starter)], cp)) {
                    out[static_cast<std::size_t>(last_starter)] = comp;
                    continue;
                }
            }
        }
        if (ccc == 0) {
            last_starter = static_cast<std::ptrdiff_t>(out.size());
            last_starter_ccc = 0;
        } else {
            last_starter_ccc = std::max(last_starter_ccc, static_cast<int>(ccc));
        }
        out.push_back(cp);
    }
    cps = std::move(out);
}

}  // namespace

std::string nfc(std::string_view raw) {
    std::vector<std::uint32_t> decomposed;
    decomposed.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) decompose_into(utf8::next(raw, i), decomposed);
    canonical_order(decomposed);
    compose(decomposed);
    return utf8::encode(decomposed);
}

bool is_whitespace_cp(std::uint32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::string normalize_text(std::string_view raw) {
    const std::string composed = nfc(raw);
    std::string out;
    out.reserve(composed.size());
    bool pending_space = false;
    bool seen_content = false;
    std::size_t i = 0;
    while (i < composed.size()) {
        const std::size_t start = i;
        const std::uint32_t cp = utf8::next(composed, i);
        if (is_whitespace_cp(cp)) {
            pending_space = seen_content;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.append(composed, start, i - start);
        seen_content = true;
    }
    return out;
}

}  // namespace chanalyze::text
