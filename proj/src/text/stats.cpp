#include "chanalyze/text/stats.hpp"

#include <algorithm>
#include <cctype>

#include "chanalyze/text/normalize.hpp"
#include "chanalyze/text/utf8.hpp"

namespace chanalyze::text {

bool is_emoji_cp(std::uint32_t cp) {
    return (cp >= 0x1F300 && cp <= 0x1F5FF) || (cp >= 0x1F600 && cp <= 0x1F64F) ||
           (cp >= 0x1F680 && cp <= 0x1F6FF) || (cp >= 0x1F900 && cp <= 0x1F9FF) ||
           (cp >= 0x2600 && cp <= 0x27BF) || (cp >= 0x1F1E6 && cp <= 0x1F1FF);
}

std::size_t count_emojis(std::string_view s) {
    std::size_t n = 0, i = 0;
    while (i < s.size()) n += is_emoji_cp(utf8::next(s, i)) ? 1 : 0;
    return n;
}

bool is_alnum_cp(std::uint32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
    }
    // Letter ranges by script, plus native digit blocks.
    if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;  // Latin-1 + extended
    if (cp >= 0x370 && cp <= 0x3FF) return true;                     // Greek
    if (cp >= 0x400 && cp <= 0x4FF) return true;                     // Cyrillic
    if (cp >= 0x590 && cp <= 0x5F4) return true;                     // Hebrew
    if (cp >= 0x620 && cp <= 0x6FF) return true;                     // Arabic (letters + digits)
    if (cp >= 0x900 && cp <= 0x97F) return true;                     // Devanagari
    return false;
}

std::size_t count_non_alnum(std::string_view s) {
    std::size_t n = 0, i = 0;
    while (i < s.size()) {
        const std::uint32_t cp = utf8::next(s, i);
        if (!is_alnum_cp(cp) && !is_whitespace_cp(cp)) ++n;
    }
    return n;
}

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t word_start = std::string_view::npos;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t at = pos;
        const std::uint32_t cp = utf8::next(s, pos);
        if (is_whitespace_cp(cp)) {
            if (word_start != std::string_view::npos) {
                out.push_back(s.substr(word_start, at - word_start));
                word_start = std::string_view::npos;
            }
        } else if (word_start == std::string_view::npos) {
            word_start = at;
        }
    }
    if (word_start != std::string_view::npos) out.push_back(s.substr(word_start));
    return out;
}

std::size_t count_words(std::string_view s) { return split_words(s).size(); }

bool is_link_token(std::string_view token) {
    const std::string low = ascii_lower(token);
    return low.rfind("http://", 0) == 0 || low.rfind("https://", 0) == 0 ||
           low.find("t.me/") != std::string::npos;
}

std::size_t count_links(std::string_view s) {
    std::size_t n = 0;
    for (const std::string_view tok : split_words(s)) n += is_link_token(tok) ? 1 : 0;
    return n;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

bool contains_word(std::string_view haystack, std::string_view lowered_needle) {
    const std::string low = ascii_lower(haystack);
    std::size_t pos = 0;
    while ((pos = low.find(lowered_needle, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !is_alnum_cp(static_cast<unsigned char>(low[pos - 1]));
        const std::size_t end = pos + lowered_needle.size();
        const bool right_ok =
            end >= low.size() || !is_alnum_cp(static_cast<unsigned char>(low[end]));
        if (left_ok && right_ok) return true;
        pos += 1;
    }
    return false;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::vector<std::uint32_t> ca = utf8::decode(a);
    const std::vector<std::uint32_t> cb = utf8::decode(b);
    if (ca.empty()) return cb.size();
    if (cb.empty()) return ca.size();

    std::vector<std::size_t> row(cb.size() + 1);
    for (std::size_t j = 0; j <= cb.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= ca.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= cb.size(); ++j) {
            const std::size_t sub = diag + (ca[i - 1] == cb[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
        }
    }
    return row[cb.size()];
}

}  // namespace chanalyze::text
