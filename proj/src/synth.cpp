#include "chanalyze/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "chanalyze/util/rng.hpp"

namespace chanalyze {

namespace {

// --- word pools ------------------------------------------------------------

const std::vector<std::string>& en_stopwords_pool() {
    static const std::vector<std::string> p = {"the", "and", "to",   "of",   "in",  "on",
                                               "for", "with", "from", "this", "that", "are",
                                               "is",  "was",  "you",  "we",   "they", "have"};
    return p;
}

const std::vector<std::string>& pool_standard() {
    static const std::vector<std::string> p = {
        "news",    "update",  "market", "daily",   "report", "story",   "video",  "photo",
        "weather", "sports",  "city",   "traffic", "event",  "music",   "review", "match",
        "season",  "channel", "stream", "morning", "evening", "culture", "travel", "finance",
        "stocks",  "local",   "world",  "science", "health",  "food"};
    return p;
}

const std::vector<std::string>& pool_official() {
    static const std::vector<std::string> p = {
        "announcement", "statement", "release",  "campaign", "community", "support",
        "service",      "launch",    "program",  "policy",   "update",    "press",
        "interview",    "partner",   "official", "team",     "project",   "product",
        "event",        "briefing",  "schedule", "network",  "members",   "platform"};
    return p;
}

const std::vector<std::string>& pool_fake() {
    static const std::vector<std::string> p = {
        "giveaway", "winner",  "crypto",  "bonus",   "prize",    "click",  "claim",
        "free",     "urgent",  "limited", "exclusive", "reward", "wallet", "double",
        "investment", "profit", "guaranteed", "instant", "lucky", "selected"};
    return p;
}

const std::vector<std::string>& pool_books() {
    static const std::vector<std::string> p = {
        "book",   "chapter", "review",  "author", "novel",   "read",   "library", "series",
        "plot",   "story",   "edition", "cover",  "writing", "fiction", "classic", "volume",
        "passage", "printed", "reader",  "shelf"};
    return p;
}

const std::vector<std::string>& pool_conspiracy() {
    static const std::vector<std::string> p = {
        "awakening", "truth",    "prophet", "ancient",  "symbol",  "revelation", "hidden",
        "sword",     "rising",   "destiny", "shadow",   "light",   "order",      "secret",
        "patriot",   "storm",    "great",   "chosen",   "signs",   "temple",     "legacy",
        "kingdom",   "warrior",  "banner",  "covenant", "herald"};
    return p;
}

const std::vector<std::string>& pool_german() {
    static const std::vector<std::string> p = {
        "der",  "die",   "und",   "das",    "nicht", "mit",   "für",    "wir",
        "sie",  "haben", "neue",  "heute",  "gross", "wahrheit", "erwachen", "zeichen",
        "welt", "macht", "gegen", "zukunft", "volk",  "freiheit"};
    return p;
}

const std::vector<std::string>& person_names() {
    static const std::vector<std::string> p = {
        "Alice Hartman",  "Marco Bauer",   "Dana Kovacs",   "Felix Moreau",  "Lena Fischer",
        "Victor Sandoval", "Nora Lindqvist", "Omar Haddad",  "Petra Novak",   "Ser Galvan",
        "Ivy Chen",        "Ruben Castillo", "Mia Kowalski", "Theo Brandt",   "Zoe Laurent",
        "Karl Jensen",     "Rosa Delgado",  "Hugo Marchetti", "Elif Demir",   "Anton Volkov"};
    return p;
}

std::string make_sentence(Rng& rng, const std::vector<std::string>& pool, std::size_t min_words,
                          std::size_t max_words, const std::vector<std::string>& stop) {
    const std::size_t n = static_cast<std::size_t>(
        rng.uniform_range(static_cast<std::int64_t>(min_words), static_cast<std::int64_t>(max_words)));
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.empty()) out += ' ';
        if (!stop.empty() && rng.bernoulli(0.35)) out += rng.pick(stop);
        else out += rng.pick(pool);
    }
    return out;
}

std::string link_token(Rng& rng) {
    static const std::vector<std::string> hosts = {"https://example.com/p/", "https://social.example/u/",
                                                   "http://mirror.example/a/", "https://t.me/"};
    return rng.pick(hosts) + std::to_string(rng.uniform_int(1'000'000));
}

// --- generator -------------------------------------------------------------

struct Builder {
    std::vector<ChannelRecord> channels;
    std::vector<std::vector<MessageRecord>> messages;
    GroundTruth truth;
    std::int64_t next_id = 101;

    std::size_t add_channel(ChannelRecord c, const std::string& role) {
        c.id = next_id++;
        truth.role[c.id] = role;
        channels.push_back(std::move(c));
        messages.emplace_back();
        return channels.size() - 1;
    }

    MessageRecord& add_message(std::size_t idx, std::int64_t date, std::string text) {
        MessageRecord m;
        m.channel_id = channels[idx].id;
        m.message_id = static_cast<std::int64_t>(messages[idx].size()) + 1;
        m.date = date;
        m.kind = MessageKind::text;
        m.text = std::move(text);
        messages[idx].push_back(std::move(m));
        return messages[idx].back();
    }
};

void generate_standard(const UniverseSpec& spec, Builder& b) {
    const std::int64_t now = spec.reference_time();
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < spec.standard_channels; ++i) {
        Rng rng = Rng::derive(spec.seed, 1000 + i);
        ChannelRecord c;
        c.title = "Channel " + std::to_string(i) + " " + rng.pick(pool_standard());
        c.description = make_sentence(rng, pool_standard(), 4, 8, en_stopwords_pool());
        c.username = "standard" + std::to_string(i);
        c.creation_date = spec.base_time - rng.uniform_range(0, 100) * 86'400;
        c.subscribers = rng.uniform_range(50, 20'000);
        c.language = rng.bernoulli(0.9) ? std::optional<std::string>("en") : std::nullopt;
        indices.push_back(b.add_channel(std::move(c), "standard"));
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
        Rng rng = Rng::derive(spec.seed, 2000 + i);
        const std::size_t idx = indices[i];
        const std::size_t n = static_cast<std::size_t>(rng.uniform_range(
            static_cast<std::int64_t>(spec.standard_messages_min),
            static_cast<std::int64_t>(spec.standard_messages_max)));
        for (std::size_t k = 0; k < n; ++k) {
            const std::int64_t date =
                b.channels[idx].creation_date +
                rng.uniform_range(0, now - b.channels[idx].creation_date);
            if (rng.bernoulli(0.25)) {
                MessageRecord m;
                m.channel_id = b.channels[idx].id;
                m.message_id = static_cast<std::int64_t>(b.messages[idx].size()) + 1;
                m.date = date;
                m.kind = MessageKind::media;
                m.media_title = make_sentence(rng, pool_standard(), 2, 4, {});
                static const std::vector<std::string> formats = {"jpg", "png", "mp4", "pdf"};
                m.media_format = rng.pick(formats);
                b.messages[idx].push_back(std::move(m));
                continue;
            }
            MessageRecord& m =
                b.add_message(idx, date, make_sentence(rng, pool_standard(), 8, 14,
                                                       en_stopwords_pool()));
            if (indices.size() > 1 && rng.bernoulli(spec.standard_forward_prob)) {
                std::size_t other = i;
                while (other == i) other = static_cast<std::size_t>(rng.uniform_int(indices.size()));
                ForwardOrigin f;
                f.from_channel_id = b.channels[indices[other]].id;
                f.from_date = std::max<std::int64_t>(1, date - rng.uniform_range(600, 5 * 86'400));
                m.fwd = std::move(f);
            }
        }
    }
}

std::vector<std::string> generate_officials(const UniverseSpec& spec, Builder& b) {
    const std::int64_t now = spec.reference_time();
    std::vector<std::string> titles;
    for (std::size_t i = 0; i < spec.official_channels; ++i) {
        Rng rng = Rng::derive(spec.seed, 3000 + i);
        ChannelRecord c;
        c.title = person_names()[i % person_names().size()];
        if (i >= person_names().size()) c.title += " " + std::to_string(i / person_names().size());
        c.description = make_sentence(rng, pool_official(), 5, 9, en_stopwords_pool());
        c.username = "official" + std::to_string(i);
        c.creation_date = spec.base_time - rng.uniform_range(100, 400) * 86'400;
        c.subscribers = rng.uniform_range(50'000, 2'000'000);
        c.verified = true;
        c.language = "en";
        titles.push_back(c.title);
        const std::size_t idx = b.add_channel(std::move(c), "official");

        const auto n = static_cast<std::size_t>(static_cast<double>(spec.official_messages) *
                                                (0.8 + 0.4 * rng.uniform()));
        const double total_links =
            std::max(0.0, rng.normal(spec.official_link_mean, spec.official_link_mean / 6.0));
        const double links_per_msg = total_links / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            // long, steady activity across the whole span
            const std::int64_t date = b.channels[idx].creation_date +
                                      rng.uniform_range(0, now - b.channels[idx].creation_date);
            std::string text = make_sentence(rng, pool_official(), 8, 14, en_stopwords_pool());
            auto links = static_cast<std::size_t>(links_per_msg);
            if (rng.uniform() < links_per_msg - static_cast<double>(links)) ++links;
            for (std::size_t l = 0; l < links; ++l) text += ' ' + link_token(rng);
            b.add_message(idx, date, std::move(text));
        }
    }
    return titles;
}

void generate_fakes(const UniverseSpec& spec, Builder& b, const std::vector<std::string>& targets) {
    const std::int64_t now = spec.reference_time();
    for (std::size_t i = 0; i < spec.fake_channels; ++i) {
        Rng rng = Rng::derive(spec.seed, 4000 + i);
        ChannelRecord c;
        std::string target = targets.empty() ? rng.pick(person_names())
                                             : targets[i % targets.size()];
        switch (rng.uniform_int(4)) {
            case 0: c.title = target + " Official"; break;
            case 1: c.title = "Real " + target; break;
            case 2: c.title = target + " Verified"; break;
            default: c.title = target; break;
        }
        if (rng.bernoulli(spec.fake_emoji_title_prob)) c.title += " ✅";  // check mark
        c.description = "The official channel of " + target;
        c.username = "fan" + std::to_string(i) + "channel";
        c.creation_date = now - rng.uniform_range(spec.fake_activity_days,
                                                  2 * spec.fake_activity_days) * 86'400;
        c.subscribers = rng.uniform_range(500, 80'000);
        c.language = "en";
        const std::size_t idx = b.add_channel(std::move(c), "fake");

        const auto n = static_cast<std::size_t>(static_cast<double>(spec.fake_messages) *
                                                (0.7 + 0.6 * rng.uniform()));
        const double total_links =
            std::max(0.0, rng.normal(spec.fake_link_mean, spec.fake_link_mean / 6.0));
        const double links_per_msg = total_links / static_cast<double>(n);
        const std::int64_t window_start = now - spec.fake_activity_days * 86'400;
        for (std::size_t k = 0; k < n; ++k) {
            // short burst of recent activity only
            const std::int64_t date =
                std::max(b.channels[idx].creation_date,
                         window_start + rng.uniform_range(0, spec.fake_activity_days * 86'400));
            std::string text = make_sentence(rng, pool_fake(), 8, 14, en_stopwords_pool());
            if (rng.bernoulli(0.5)) text += " \U0001F525";  // emoji-heavy writing style
            if (rng.bernoulli(0.3)) text += " !!!";
            auto links = static_cast<std::size_t>(links_per_msg);
            if (rng.uniform() < links_per_msg - static_cast<double>(links)) ++links;
            for (std::size_t l = 0; l < links; ++l) text += ' ' + link_token(rng);
            b.add_message(idx, date, std::move(text));
        }
    }
}

void generate_clones(const UniverseSpec& spec, Builder& b) {
    if (spec.clone_pairs > 0 && spec.clone_originals == 0) {
        throw std::invalid_argument("universe spec: clone_pairs without clone_originals");
    }
    const std::int64_t now = spec.reference_time();

    struct Original {
        std::size_t idx;
        std::vector<std::size_t> message_slots;  // positions of eligible texts
    };
    std::vector<Original> originals;

    for (std::size_t i = 0; i < spec.clone_originals; ++i) {
        Rng rng = Rng::derive(spec.seed, 5000 + i);
        ChannelRecord c;
        c.title = "Reading Room " + std::to_string(i);
        c.description = make_sentence(rng, pool_books(), 4, 8, en_stopwords_pool());
        c.username = "readingroom" + std::to_string(i);
        c.creation_date = spec.base_time - rng.uniform_range(50, 200) * 86'400;
        c.subscribers = rng.uniform_range(1'000, 60'000);
        c.language = "en";
        const std::size_t idx = b.add_channel(std::move(c), "original");

        Original orig{idx, {}};
        const std::int64_t span = now - 30 * 86'400 - b.channels[idx].creation_date;
        for (std::size_t k = 0; k < spec.original_messages; ++k) {
            const std::int64_t date = b.channels[idx].creation_date + rng.uniform_range(0, span);
            b.add_message(idx, date, make_sentence(rng, pool_books(), 9, 14, en_stopwords_pool()));
            orig.message_slots.push_back(b.messages[idx].size() - 1);
        }
        originals.push_back(std::move(orig));
    }

    // round-robin clones over originals; per original, kinds rotate
    std::vector<std::size_t> clones_of_original(originals.size(), 0);
    for (std::size_t i = 0; i < spec.clone_pairs; ++i) {
        Rng rng = Rng::derive(spec.seed, 6000 + i);
        const std::size_t oi = i % originals.size();
        const Original& orig = originals[oi];
        const ChannelRecord& oc = b.channels[orig.idx];
        const std::size_t nth = clones_of_original[oi]++;

        ChannelRecord c;
        if (nth == 0) {  // perfect clone
            c.title = oc.title;
            c.description = oc.description;
        } else if (nth == 1) {  // titled clone: small edit
            c.title = oc.title + "s";
            c.description = make_sentence(rng, pool_books(), 4, 8, en_stopwords_pool());
        } else {
            c.title = "Best " + rng.pick(pool_books()) + " " + std::to_string(i);
            c.description = make_sentence(rng, pool_fake(), 4, 8, en_stopwords_pool());
        }
        c.username = "mirror" + std::to_string(i);
        c.creation_date = oc.creation_date + rng.uniform_range(1, 30) * 86'400;
        c.subscribers = rng.uniform_range(100, 120'000);
        c.language = "en";
        const std::int64_t clone_creation = c.creation_date;
        const std::size_t idx = b.add_channel(std::move(c), "clone");
        b.truth.clone_pairs.emplace_back(oc.id, b.channels[idx].id);

        // copy a random subset of the original's messages, strictly later
        std::vector<std::size_t> slots = orig.message_slots;
        rng.shuffle(slots);
        const auto copy_n = static_cast<std::size_t>(
            std::ceil(spec.clone_copy_fraction * static_cast<double>(slots.size())));
        slots.resize(std::max<std::size_t>(copy_n, 1));
        for (const std::size_t slot : slots) {
            const MessageRecord& src = b.messages[orig.idx][slot];
            const std::int64_t delay =
                rng.uniform_range(spec.clone_delay_min_s, spec.clone_delay_max_s);
            b.add_message(idx, src.date + delay, src.text);
        }
        const auto injected = static_cast<std::size_t>(
            std::llround(spec.clone_injection_rate * static_cast<double>(slots.size())));
        for (std::size_t k = 0; k < injected; ++k) {
            const std::int64_t date = clone_creation + rng.uniform_range(0, now - clone_creation);
            b.add_message(idx, date,
                          make_sentence(rng, pool_fake(), 9, 14, en_stopwords_pool()) +
                              " promo" + std::to_string(i) + "x" + std::to_string(k));
        }
    }

    // Sibling clones of one original share copied texts. Make sure neither
    // sibling post-dates the other on every shared message, so only the
    // scripted (original, clone) pairs satisfy the date-order predicate.
    for (std::size_t a = 0; a < spec.clone_pairs; ++a) {
        for (std::size_t bp = a + 1; bp < spec.clone_pairs; ++bp) {
            if (a % originals.size() != bp % originals.size()) continue;
            const std::size_t ia = b.channels.size() - spec.clone_pairs + a;
            const std::size_t ib = b.channels.size() - spec.clone_pairs + bp;
            std::unordered_map<std::string, std::size_t> text_to_slot;
            for (std::size_t s = 0; s < b.messages[ia].size(); ++s) {
                text_to_slot[b.messages[ia][s].text] = s;
            }
            std::vector<std::pair<std::size_t, std::size_t>> shared;  // (slot in a, slot in b)
            for (std::size_t s = 0; s < b.messages[ib].size(); ++s) {
                const auto it = text_to_slot.find(b.messages[ib][s].text);
                if (it != text_to_slot.end()) shared.emplace_back(it->second, s);
            }
            if (shared.size() < 2) continue;
            bool a_always_earlier = true, b_always_earlier = true;
            for (const auto& [sa, sb] : shared) {
                if (b.messages[ia][sa].date >= b.messages[ib][sb].date) a_always_earlier = false;
                if (b.messages[ib][sb].date >= b.messages[ia][sa].date) b_always_earlier = false;
            }
            if (a_always_earlier || b_always_earlier) {
                // swap one shared pair's dates to break the total order
                const auto& [sa, sb] = shared.front();
                std::swap(b.messages[ia][sa].date, b.messages[ib][sb].date);
            }
        }
    }
}

void generate_conspiracy(const UniverseSpec& spec, Builder& b) {
    if (spec.conspiracy_channels == 0) return;
    if (spec.conspiracy_channels < 3) {
        throw std::invalid_argument("universe spec: conspiracy network needs >= 3 channels");
    }
    const std::size_t members = spec.conspiracy_channels - 1;
    if (spec.conspiracy_fakes > members) {
        throw std::invalid_argument("universe spec: more conspiracy fakes than members");
    }
    const std::size_t total_msgs = spec.conspiracy_distinct_messages;
    const auto n_de = static_cast<std::size_t>(
        std::llround(spec.conspiracy_non_english * static_cast<double>(total_msgs)));
    const std::size_t n_en = total_msgs - n_de;
    if (n_en < members + 1) {
        throw std::invalid_argument(
            "universe spec: need at least one English message per member plus one for the core");
    }

    const std::int64_t now = spec.reference_time();
    const std::int64_t start = now - 120 * 86'400;

    Rng rng = Rng::derive(spec.seed, 7000);

    // core channel
    std::size_t core_idx;
    {
        ChannelRecord c;
        c.title = "The Herald";
        c.description = make_sentence(rng, pool_conspiracy(), 5, 9, en_stopwords_pool());
        c.username = "theherald";
        c.creation_date = start - 30 * 86'400;
        c.subscribers = 40'000;
        c.language = "en";
        core_idx = b.add_channel(std::move(c), "conspiracy_core");
        b.truth.core_channel = b.channels[core_idx].id;
    }

    const auto german_count = static_cast<std::size_t>(
        std::llround(spec.conspiracy_german_members * static_cast<double>(members)));
    std::vector<std::size_t> member_idx;
    std::vector<bool> member_is_de;
    for (std::size_t i = 0; i < members; ++i) {
        ChannelRecord c;
        const bool is_fake_style = i < spec.conspiracy_fakes;
        const bool is_de = i >= members - german_count;
        if (is_fake_style) {
            const std::string target = person_names()[i % person_names().size()];
            c.title = (i % 2 == 0) ? target + " Real" : target + " Official";
            c.description = "The official channel of " + target;
        } else if (is_de) {
            c.title = "Erwachen " + std::to_string(i);
            c.description = make_sentence(rng, pool_german(), 4, 8, {});
        } else {
            c.title = "Herald Post " + std::to_string(i);
            c.description = make_sentence(rng, pool_conspiracy(), 4, 8, en_stopwords_pool());
        }
        c.username = "herald" + std::to_string(i);
        c.creation_date = start + rng.uniform_range(0, 30) * 86'400;
        c.subscribers = rng.uniform_range(1'000, 30'000);
        c.language = is_de ? "de" : "en";
        member_idx.push_back(b.add_channel(std::move(c),
                                           is_fake_style ? "conspiracy_fake" : "conspiracy"));
        member_is_de.push_back(is_de);
    }

    b.truth.conspiracy_members.push_back(b.channels[core_idx].id);
    for (const std::size_t idx : member_idx) {
        b.truth.conspiracy_members.push_back(b.channels[idx].id);
    }

    std::vector<std::size_t> de_members;
    for (std::size_t i = 0; i < members; ++i) {
        if (member_is_de[i]) de_members.push_back(i);
    }
    if (n_de > 0 && de_members.size() < 2) {
        throw std::invalid_argument(
            "universe spec: German messages need at least two German members");
    }

    struct ScriptedMessage {
        std::size_t creator;  // member index, or SIZE_MAX for the core
        bool german = false;
        bool never_forwarded = false;
    };
    std::vector<ScriptedMessage> script;
    // one English message per member (keeps the member subgraph strongly
    // connected via ring placement below), the rest created by the core
    for (std::size_t i = 0; i < members; ++i) script.push_back({i, false, false});
    for (std::size_t k = members; k < n_en; ++k) script.push_back({SIZE_MAX, false, false});
    for (std::size_t k = 0; k < n_de; ++k) script.push_back({de_members[k % de_members.size()], true, false});

    // never-forwarded quota: member-created messages, core excluded
    const auto never_quota = static_cast<std::size_t>(
        std::llround(spec.conspiracy_never_forwarded * static_cast<double>(total_msgs)));
    std::size_t marked = 0;
    for (std::size_t k = script.size(); k-- > 0 && marked < never_quota;) {
        if (script[k].creator != SIZE_MAX) {
            script[k].never_forwarded = true;
            ++marked;
        }
    }

    std::size_t first_within = 0, forwarded_messages = 0;
    bool core_broadcast_done = false;

    for (std::size_t mi = 0; mi < script.size(); ++mi) {
        const ScriptedMessage& sm = script[mi];
        const std::size_t creator_idx = sm.creator == SIZE_MAX ? core_idx : member_idx[sm.creator];
        const std::int64_t origin_date =
            start + 31 * 86'400 + rng.uniform_range(0, 60 * 86'400);
        std::string text =
            sm.german ? make_sentence(rng, pool_german(), 9, 14, {})
                      : make_sentence(rng, pool_conspiracy(), 9, 14, en_stopwords_pool());
        text += " s" + std::to_string(mi);  // distinct content per scripted message
        b.add_message(creator_idx, origin_date, text);

        if (sm.never_forwarded) continue;

        // placement set
        std::vector<std::size_t> eligible;
        if (sm.german) {
            for (const std::size_t d : de_members) {
                if (sm.creator != d) eligible.push_back(d);
            }
        } else {
            for (std::size_t i = 0; i < members; ++i) {
                if (sm.creator != i) eligible.push_back(i);
            }
        }
        if (eligible.empty()) continue;

        double coverage;
        const double band = rng.uniform();
        if (band < 0.35) coverage = 0.85 + 0.15 * rng.uniform();
        else if (band < 0.65) coverage = 0.2 + 0.6 * rng.uniform();
        else coverage = 0.02 + 0.18 * rng.uniform();

        std::size_t count = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(coverage * static_cast<double>(eligible.size()))));
        count = std::min(count, eligible.size());

        rng.shuffle(eligible);
        std::vector<std::size_t> placements(eligible.begin(),
                                            eligible.begin() + static_cast<std::ptrdiff_t>(count));
        // ring guarantee: member-created English messages always reach the
        // next member, core's first message reaches everyone
        if (!sm.german && sm.creator != SIZE_MAX) {
            const std::size_t next = (sm.creator + 1) % members;
            if (next != sm.creator &&
                std::find(placements.begin(), placements.end(), next) == placements.end()) {
                placements.push_back(next);
            }
        }
        if (sm.creator == SIZE_MAX && !core_broadcast_done) {
            placements.clear();
            for (std::size_t i = 0; i < members; ++i) placements.push_back(i);
            core_broadcast_done = true;
        }

        ++forwarded_messages;
        std::int64_t delay;
        if (rng.bernoulli(spec.conspiracy_first_within_10min)) {
            delay = rng.uniform_range(5, 600);
            ++first_within;
        } else {
            delay = rng.uniform_range(601, 43'200);
        }
        for (const std::size_t target : placements) {
            MessageRecord& copy =
                b.add_message(member_idx[target], origin_date + delay, text);
            ForwardOrigin f;
            f.from_channel_id = b.channels[creator_idx].id;
            f.from_date = origin_date;
            copy.fwd = std::move(f);
            delay += rng.uniform_range(1, 3'600);
        }
    }

    b.truth.scripted_first_within_10min =
        forwarded_messages == 0
            ? 0.0
            : static_cast<double>(first_within) / static_cast<double>(forwarded_messages);
    b.truth.scripted_never_forwarded = marked;
}

}  // namespace

Universe generate_universe(const UniverseSpec& spec) {
    Builder b;
    generate_standard(spec, b);
    const std::vector<std::string> official_titles = generate_officials(spec, b);
    generate_fakes(spec, b, official_titles);
    generate_clones(spec, b);
    generate_conspiracy(spec, b);

    Universe u;
    u.dataset = Dataset(std::move(b.channels), std::move(b.messages));
    u.truth = std::move(b.truth);
    return u;
}

Dataset subset_dataset(const Dataset& ds, const std::vector<std::int64_t>& channel_ids) {
    std::vector<ChannelRecord> channels;
    std::vector<std::vector<MessageRecord>> messages;
    std::unordered_set<std::int64_t> wanted(channel_ids.begin(), channel_ids.end());
    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        if (wanted.count(ds.channel(i).id) == 0) continue;
        channels.push_back(ds.channel(i));
        messages.push_back(ds.messages(i));
    }
    return Dataset(std::move(channels), std::move(messages));
}

CrawlReport simulate_crawl(const Dataset& universe, const std::vector<std::int64_t>& seeds,
                           std::size_t window, std::size_t max_iterations) {
    std::set<std::int64_t> known;
    for (const std::int64_t s : seeds) {
        if (!universe.index_of(s)) {
            throw std::invalid_argument("simulate_crawl: seed channel " + std::to_string(s) +
                                        " not in the universe");
        }
        known.insert(s);
    }

    // origins visible in a channel's crawl window (the last `window` messages)
    const auto window_origins = [&](std::int64_t channel_id) {
        std::vector<std::int64_t> origins;
        const auto idx = universe.index_of(channel_id);
        const auto& msgs = universe.messages(*idx);
        const std::size_t from = msgs.size() > window ? msgs.size() - window : 0;
        for (std::size_t k = from; k < msgs.size(); ++k) {
            const auto& m = msgs[k];
            if (m.fwd && m.fwd->from_channel_id && universe.index_of(*m.fwd->from_channel_id)) {
                origins.push_back(*m.fwd->from_channel_id);
            }
        }
        std::sort(origins.begin(), origins.end());
        origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
        return origins;
    };

    CrawlReport report;
    std::vector<std::int64_t> frontier(known.begin(), known.end());
    for (std::size_t iter = 0; iter < max_iterations && !frontier.empty(); ++iter) {
        std::vector<std::int64_t> discovered;
        for (const std::int64_t cid : frontier) {
            for (const std::int64_t origin : window_origins(cid)) {
                if (known.insert(origin).second) discovered.push_back(origin);
            }
        }
        std::sort(discovered.begin(), discovered.end());

        CrawlReport::Iteration row;
        row.new_channels = discovered.size();
        std::size_t explored = 0;
        for (const std::int64_t cid : known) {
            bool all_known = true;
            for (const std::int64_t origin : window_origins(cid)) {
                if (known.count(origin) == 0) {
                    all_known = false;
                    break;
                }
            }
            if (all_known) ++explored;
        }
        row.fully_explored_fraction =
            known.empty() ? 1.0 : static_cast<double>(explored) / static_cast<double>(known.size());
        report.iterations.push_back(row);

        frontier = std::move(discovered);
    }

    report.crawled_ids.assign(known.begin(), known.end());
    report.crawled = subset_dataset(universe, report.crawled_ids);
    return report;
}

// --- spec / ground truth I/O -------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, z = s.size();
    while (a < z && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (z > a && std::isspace(static_cast<unsigned char>(s[z - 1]))) --z;
    return s.substr(a, z - a);
}

}  // namespace

UniverseSpec UniverseSpec::parse(std::istream& in, const std::string& name) {
    UniverseSpec spec;
    std::unordered_map<std::string, std::function<void(const std::string&)>> setters;
    const auto u64 = [](std::uint64_t& field) {
        return [&field](const std::string& v) { field = std::stoull(v); };
    };
    const auto sz = [](std::size_t& field) {
        return [&field](const std::string& v) { field = std::stoull(v); };
    };
    const auto i64 = [](std::int64_t& field) {
        return [&field](const std::string& v) { field = std::stoll(v); };
    };
    const auto f64 = [](double& field) {
        return [&field](const std::string& v) { field = std::stod(v); };
    };
    setters["seed"] = u64(spec.seed);
    setters["base_time"] = i64(spec.base_time);
    setters["active_days"] = i64(spec.active_days);
    setters["standard_channels"] = sz(spec.standard_channels);
    setters["standard_messages_min"] = sz(spec.standard_messages_min);
    setters["standard_messages_max"] = sz(spec.standard_messages_max);
    setters["standard_forward_prob"] = f64(spec.standard_forward_prob);
    setters["official_channels"] = sz(spec.official_channels);
    setters["official_messages"] = sz(spec.official_messages);
    setters["official_link_mean"] = f64(spec.official_link_mean);
    setters["fake_channels"] = sz(spec.fake_channels);
    setters["fake_messages"] = sz(spec.fake_messages);
    setters["fake_link_mean"] = f64(spec.fake_link_mean);
    setters["fake_emoji_title_prob"] = f64(spec.fake_emoji_title_prob);
    setters["fake_activity_days"] = i64(spec.fake_activity_days);
    setters["clone_originals"] = sz(spec.clone_originals);
    setters["clone_pairs"] = sz(spec.clone_pairs);
    setters["original_messages"] = sz(spec.original_messages);
    setters["clone_copy_fraction"] = f64(spec.clone_copy_fraction);
    setters["clone_delay_min_s"] = i64(spec.clone_delay_min_s);
    setters["clone_delay_max_s"] = i64(spec.clone_delay_max_s);
    setters["clone_injection_rate"] = f64(spec.clone_injection_rate);
    setters["conspiracy_channels"] = sz(spec.conspiracy_channels);
    setters["conspiracy_fakes"] = sz(spec.conspiracy_fakes);
    setters["conspiracy_distinct_messages"] = sz(spec.conspiracy_distinct_messages);
    setters["conspiracy_first_within_10min"] = f64(spec.conspiracy_first_within_10min);
    setters["conspiracy_never_forwarded"] = f64(spec.conspiracy_never_forwarded);
    setters["conspiracy_non_english"] = f64(spec.conspiracy_non_english);
    setters["conspiracy_german_members"] = f64(spec.conspiracy_german_members);

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == '[') continue;  // [section] headers are cosmetic
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError(name, lineno, "expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw ParseError(name, lineno, "unknown spec key \"" + key + "\"");
        try {
            it->second(value);
        } catch (const std::exception&) {
            throw ParseError(name, lineno, "bad value for \"" + key + "\"");
        }
    }
    return spec;
}

UniverseSpec UniverseSpec::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open spec file");
    return parse(in, path);
}

void UniverseSpec::serialize(std::ostream& out) const {
    out << "[universe]\n";
    out << "seed = " << seed << "\n";
    out << "base_time = " << base_time << "\n";
    out << "active_days = " << active_days << "\n";
    out << "\n[standard]\n";
    out << "standard_channels = " << standard_channels << "\n";
    out << "standard_messages_min = " << standard_messages_min << "\n";
    out << "standard_messages_max = " << standard_messages_max << "\n";
    out << "standard_forward_prob = " << standard_forward_prob << "\n";
    out << "\n[officials]\n";
    out << "official_channels = " << official_channels << "\n";
    out << "official_messages = " << official_messages << "\n";
    out << "official_link_mean = " << official_link_mean << "\n";
    out << "\n[fakes]\n";
    out << "fake_channels = " << fake_channels << "\n";
    out << "fake_messages = " << fake_messages << "\n";
    out << "fake_link_mean = " << fake_link_mean << "\n";
    out << "fake_emoji_title_prob = " << fake_emoji_title_prob << "\n";
    out << "fake_activity_days = " << fake_activity_days << "\n";
    out << "\n[clones]\n";
    out << "clone_originals = " << clone_originals << "\n";
    out << "clone_pairs = " << clone_pairs << "\n";
    out << "original_messages = " << original_messages << "\n";
    out << "clone_copy_fraction = " << clone_copy_fraction << "\n";
    out << "clone_delay_min_s = " << clone_delay_min_s << "\n";
    out << "clone_delay_max_s = " << clone_delay_max_s << "\n";
    out << "clone_injection_rate = " << clone_injection_rate << "\n";
    out << "\n[conspiracy]\n";
    out << "conspiracy_channels = " << conspiracy_channels << "\n";
    out << "conspiracy_fakes = " << conspiracy_fakes << "\n";
    out << "conspiracy_distinct_messages = " << conspiracy_distinct_messages << "\n";
    out << "conspiracy_first_within_10min = " << conspiracy_first_within_10min << "\n";
    out << "conspiracy_never_forwarded = " << conspiracy_never_forwarded << "\n";
    out << "conspiracy_non_english = " << conspiracy_non_english << "\n";
    out << "conspiracy_german_members = " << conspiracy_german_members << "\n";
}

void GroundTruth::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write ground truth " + path);
    out << "record,a,b\n";
    std::vector<std::pair<std::int64_t, std::string>> roles(role.begin(), role.end());
    std::sort(roles.begin(), roles.end());
    for (const auto& [id, r] : roles) out << "role," << id << "," << r << "\n";
    for (const auto& [o, c] : clone_pairs) out << "clone_pair," << o << "," << c << "\n";
    for (const std::int64_t id : conspiracy_members) out << "conspiracy_member," << id << ",\n";
    if (core_channel != 0) out << "core," << core_channel << ",\n";
    char frac[64];
    std::snprintf(frac, sizeof(frac), "%.17g", scripted_first_within_10min);
    out << "stat,first_within_10min," << frac << "\n";
    out << "stat,never_forwarded," << scripted_never_forwarded << "\n";
}

GroundTruth GroundTruth::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ground truth " + path);
    GroundTruth truth;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string record, a, bb;
        std::getline(ss, record, ',');
        std::getline(ss, a, ',');
        std::getline(ss, bb);
        if (record == "role") truth.role[std::stoll(a)] = bb;
        else if (record == "clone_pair") truth.clone_pairs.emplace_back(std::stoll(a), std::stoll(bb));
        else if (record == "conspiracy_member") truth.conspiracy_members.push_back(std::stoll(a));
        else if (record == "core") truth.core_channel = std::stoll(a);
        else if (record == "stat" && a == "first_within_10min")
            truth.scripted_first_within_10min = std::stod(bb);
        else if (record == "stat" && a == "never_forwarded")
            truth.scripted_never_forwarded = std::stoull(bb);
    }
    return truth;
}

}  // namespace chanalyze
