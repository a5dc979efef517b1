#include "chanalyze/text/language.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <unordered_set>

#include "chanalyze/text/normalize.hpp"
#include "chanalyze/text/stats.hpp"
#include "chanalyze/text/utf8.hpp"

namespace chanalyze::text {

namespace {

enum class Script { latin, cyrillic, arabic, devanagari, other };

Script script_of(std::uint32_t cp) {
    if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return Script::latin;
    if (cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7) return Script::latin;
    if (cp >= 0x400 && cp <= 0x4FF) return Script::cyrillic;
    if (cp >= 0x600 && cp <= 0x6FF) return Script::arabic;
    if (cp >= 0x900 && cp <= 0x97F) return Script::devanagari;
    return Script::other;
}

struct Profile {
    const char* code;
    Script script;
    std::unordered_set<std::string> stopwords;
};

std::unordered_set<std::string> words(std::initializer_list<const char*> list) {
    std::unordered_set<std::string> out;
    for (const char* w : list) out.insert(w);
    return out;
}

const std::vector<Profile>& profiles() {
    static const std::vector<Profile> p = {
        {"en", Script::latin,
         words({"the", "and", "of", "to", "in", "is", "you", "that", "it", "for", "on", "with",
                "as", "are", "this", "was", "have", "be", "at", "or", "from", "not", "by", "but",
                "what", "all", "we", "your", "over", "they"})},
        {"de", Script::latin,
         words({"der", "die", "das", "und", "ist", "nicht", "ein", "eine", "mit", "für", "auf",
                "den", "dem", "des", "zu", "von", "sich", "auch", "wird", "bei", "oder", "wir",
                "aber", "nur", "noch", "wie", "ich", "sie"})},
        {"it", Script::latin,
         words({"il", "la", "di", "che", "un", "una", "per", "non", "sono", "con", "del", "della",
                "più", "anche", "come", "questo", "hanno", "alla", "nel", "gli", "dei", "le",
                "si", "ma"})},
        {"et", Script::latin,
         words({"ja", "on", "ei", "et", "see", "oma", "ta", "kui", "ka", "mis", "aga", "või",
                "siis", "nii", "välja", "üle", "tema", "olen", "oli", "kes", "ning", "seda"})},
        {"id", Script::latin,
         words({"yang", "dan", "di", "itu", "dengan", "untuk", "tidak", "ini", "dari", "dalam",
                "akan", "pada", "juga", "saya", "ke", "karena", "ada", "mereka", "sudah", "atau",
                "bisa", "kita"})},
        {"ru", Script::cyrillic,
         words({"и", "в", "не", "на", "что", "я", "с", "он", "как", "это", "по", "но", "они",
                "мы", "из", "у", "за", "вы", "так", "же", "от", "то", "для", "его", "был",
                "она"})},
        {"bg", Script::cyrillic,
         words({"и", "в", "не", "на", "че", "да", "се", "е", "за", "това", "той", "като", "но",
                "ние", "от", "си", "са", "ще", "до", "при", "който", "една", "му", "ми"})},
        {"ar", Script::arabic,
         words({"في", "من", "على", "و", "إلى", "أن", "عن", "مع", "هذا", "التي", "كان", "لم",
                "ما", "لا", "هو", "هي", "قد", "كل", "بعد", "الذي"})},
        {"fa", Script::arabic,
         words({"و", "در", "به", "از", "که", "این", "را", "با", "است", "برای", "آن", "یک",
                "خود", "تا", "بر", "او", "ها", "می", "شد", "های"})},
        {"hi", Script::devanagari,
         words({"के", "का", "की", "है", "में", "से", "को", "और", "पर", "यह", "नहीं", "हो",
                "था", "कि", "जो", "ने", "एक", "हैं", "कर", "भी"})},
        {"mr", Script::devanagari,
         words({"आणि", "आहे", "या", "त्या", "च्या", "ने", "ते", "का", "व", "ही", "तो", "मी",
                "हे", "असे", "केली", "झाले", "आहेत", "म्हणून", "होते", "तर"})},
    };
    return p;
}

// Lowercase ASCII and Cyrillic; other scripts are left as-is (the stopword
// lists are already in canonical form).
std::string fold_token(std::string_view tok) {
    std::string out;
    out.reserve(tok.size());
    std::size_t i = 0;
    while (i < tok.size()) {
        std::uint32_t cp = utf8::next(tok, i);
        if (cp >= 'A' && cp <= 'Z') cp += 0x20;
        else if (cp >= 0x410 && cp <= 0x42F) cp += 0x20;  // А..Я
        else if (cp == 0x401) cp = 0x451;                 // Ё
        utf8::append(out, cp);
    }
    return out;
}

}  // namespace

std::string classify_message_language(std::string_view text) {
    // Dominant script gates the candidate set; stopword hits decide within it.
    std::array<std::size_t, 4> script_counts{};
    std::size_t i = 0;
    while (i < text.size()) {
        const Script s = script_of(utf8::next(text, i));
        if (s != Script::other) ++script_counts[static_cast<std::size_t>(s)];
    }
    std::size_t best_script = 0, best_count = 0;
    for (std::size_t k = 0; k < script_counts.size(); ++k) {
        if (script_counts[k] > best_count) {
            best_count = script_counts[k];
            best_script = k;
        }
    }
    if (best_count == 0) return "";
    const Script dominant = static_cast<Script>(best_script);

    std::map<std::string, std::size_t> hits;
    for (const std::string_view raw_tok : split_words(text)) {
        // fold case, then trim surrounding punctuation
        const std::vector<std::uint32_t> cps = utf8::decode(fold_token(raw_tok));
        std::size_t lo = 0, hi = cps.size();
        while (lo < hi && !is_alnum_cp(cps[lo])) ++lo;
        while (hi > lo && !is_alnum_cp(cps[hi - 1])) --hi;
        if (lo == hi) continue;
        std::string tok;
        for (std::size_t k = lo; k < hi; ++k) utf8::append(tok, cps[k]);
        for (const Profile& p : profiles()) {
            if (p.script != dominant) continue;
            if (p.stopwords.count(tok) != 0) ++hits[p.code];
        }
    }
    std::string best;
    std::size_t best_hits = 0;
    bool tie = false;
    for (const auto& [code, n] : hits) {
        if (n > best_hits) {
            best_hits = n;
            best = code;
            tie = false;
        } else if (n == best_hits && n > 0) {
            tie = true;
        }
    }
    if (best_hits == 0 || tie) return "";
    return best;
}

std::string detect_language(const std::vector<std::string_view>& message_texts) {
    std::size_t total_tokens = 0;
    std::map<std::string, std::size_t> votes;
    std::size_t messages = 0;
    for (const std::string_view t : message_texts) {
        total_tokens += count_words(t);
        ++messages;
        const std::string lang = classify_message_language(t);
        if (!lang.empty()) ++votes[lang];
    }
    if (messages == 0 || total_tokens < 20) return "und";
    std::string best;
    std::size_t best_votes = 0;
    for (const auto& [code, n] : votes) {
        if (n > best_votes) {
            best_votes = n;
            best = code;
        }
    }
    // Majority must exceed half of the messages, ties included.
    if (best.empty() || 2 * best_votes <= messages) return "und";
    return best;
}

ViolatedTermsMatcher ViolatedTermsMatcher::with_defaults() {
    ViolatedTermsMatcher m;
    m.patterns = {{"violated", "terms of service"}, {"unavailable", "copyright"}};
    return m;
}

bool ViolatedTermsMatcher::matches(std::string_view text) const {
    const std::string low = ascii_lower(text);
    for (const auto& conjunction : patterns) {
        bool all = !conjunction.empty();
        for (const std::string& needle : conjunction) {
            if (low.find(needle) == std::string::npos) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

bool is_violated_terms(std::string_view text) {
    static const ViolatedTermsMatcher defaults = ViolatedTermsMatcher::with_defaults();
    return defaults.matches(text);
}

}  // namespace chanalyze::text
