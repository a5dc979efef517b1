#include "chanalyze/data_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "chanalyze/text/language.hpp"

namespace chanalyze {

using json = nlohmann::json;

Dataset::Dataset(std::vector<ChannelRecord> channels,
                 std::vector<std::vector<MessageRecord>> messages,
                 std::optional<std::int64_t> reference_time)
    : channels_(std::move(channels)), messages_(std::move(messages)) {
    if (messages_.size() != channels_.size()) {
        throw std::invalid_argument("dataset: channels/messages size mismatch");
    }
    index_.reserve(channels_.size());
    for (std::size_t i = 0; i < channels_.size(); ++i) index_[channels_[i].id] = i;

    std::int64_t max_date = 0;
    for (auto& msgs : messages_) {
        std::sort(msgs.begin(), msgs.end(), [](const MessageRecord& a, const MessageRecord& b) {
            return a.date != b.date ? a.date < b.date : a.message_id < b.message_id;
        });
        total_messages_ += msgs.size();
        if (!msgs.empty()) max_date = std::max(max_date, msgs.back().date);
    }
    reference_time_ = reference_time.value_or(max_date);
}

namespace {

[[noreturn]] void fail(const std::string& file, std::size_t line, const std::string& what) {
    throw ParseError(file, line, what);
}

std::int64_t require_int(const json& j, const char* key, const std::string& file,
                         std::size_t line) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) {
        fail(file, line, std::string("missing or non-integer field \"") + key + "\"");
    }
    return it->get<std::int64_t>();
}

std::string require_str(const json& j, const char* key, const std::string& file,
                        std::size_t line) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        fail(file, line, std::string("missing or non-string field \"") + key + "\"");
    }
    return it->get<std::string>();
}

bool require_bool(const json& j, const char* key, const std::string& file, std::size_t line) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_boolean()) {
        fail(file, line, std::string("missing or non-boolean field \"") + key + "\"");
    }
    return it->get<bool>();
}

std::optional<std::string> optional_str(const json& j, const char* key, const std::string& file,
                                        std::size_t line) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(file, line, std::string("field \"") + key + "\" must be string or null");
    return it->get<std::string>();
}

ChannelRecord parse_channel_line(const json& j, const std::string& file, std::size_t line) {
    ChannelRecord c;
    c.id = require_int(j, "id", file, line);
    c.username = optional_str(j, "username", file, line);
    c.title = require_str(j, "title", file, line);
    c.description = require_str(j, "description", file, line);
    c.creation_date = require_int(j, "creation_date", file, line);
    c.subscribers = require_int(j, "subscribers", file, line);
    c.verified = require_bool(j, "verified", file, line);
    c.scam = require_bool(j, "scam", file, line);
    c.language = optional_str(j, "language", file, line);

    if (c.subscribers < 0) fail(file, line, "subscribers must be >= 0");
    if (c.creation_date <= 0) fail(file, line, "creation_date must be > 0");
    if (c.verified && c.scam) fail(file, line, "channel cannot be both verified and scam");
    return c;
}

MessageRecord parse_message_line(const json& j, const std::string& file, std::size_t line) {
    MessageRecord m;
    m.channel_id = require_int(j, "channel_id", file, line);
    m.message_id = require_int(j, "message_id", file, line);
    m.date = require_int(j, "date", file, line);
    const std::string kind = require_str(j, "kind", file, line);
    if (kind == "text") {
        m.kind = MessageKind::text;
        m.text = require_str(j, "text", file, line);
    } else if (kind == "media") {
        m.kind = MessageKind::media;
        const auto it = j.find("media");
        if (it == j.end() || !it->is_object()) fail(file, line, "media message requires \"media\" object");
        m.media_title = require_str(*it, "title", file, line);
        m.media_format = require_str(*it, "format", file, line);
    } else {
        fail(file, line, "kind must be \"text\" or \"media\"");
    }
    if (const auto it = j.find("fwd"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) fail(file, line, "fwd must be an object");
        ForwardOrigin f;
        if (const auto fc = it->find("from_channel_id"); fc != it->end() && !fc->is_null()) {
            if (!fc->is_number_integer()) fail(file, line, "fwd.from_channel_id must be int or null");
            f.from_channel_id = fc->get<std::int64_t>();
        }
        f.from_name = optional_str(*it, "from_name", file, line);
        f.from_date = require_int(*it, "from_date", file, line);
        f.author = optional_str(*it, "author", file, line);
        if (f.from_date > m.date) fail(file, line, "fwd.from_date is after the message date");
        m.fwd = std::move(f);
    }
    return m;
}

json to_json(const ChannelRecord& c) {
    json j;
    j["id"] = c.id;
    j["username"] = c.username ? json(*c.username) : json(nullptr);
    j["title"] = c.title;
    j["description"] = c.description;
    j["creation_date"] = c.creation_date;
    j["subscribers"] = c.subscribers;
    j["verified"] = c.verified;
    j["scam"] = c.scam;
    j["language"] = c.language ? json(*c.language) : json(nullptr);
    return j;
}

json to_json(const MessageRecord& m) {
    json j;
    j["channel_id"] = m.channel_id;
    j["message_id"] = m.message_id;
    j["date"] = m.date;
    if (m.kind == MessageKind::text) {
        j["kind"] = "text";
        j["text"] = m.text;
    } else {
        j["kind"] = "media";
        j["media"] = {{"title", m.media_title}, {"format", m.media_format}};
    }
    if (m.fwd) {
        json f;
        f["from_channel_id"] = m.fwd->from_channel_id ? json(*m.fwd->from_channel_id) : json(nullptr);
        f["from_name"] = m.fwd->from_name ? json(*m.fwd->from_name) : json(nullptr);
        f["from_date"] = m.fwd->from_date;
        f["author"] = m.fwd->author ? json(*m.fwd->author) : json(nullptr);
        j["fwd"] = std::move(f);
    }
    return j;
}

}  // namespace

Dataset parse_dataset_streams(std::istream& channels_in, std::istream& messages_in,
                              const std::string& channels_name,
                              const std::string& messages_name) {
    std::vector<ChannelRecord> channels;
    std::unordered_map<std::int64_t, std::size_t> index;
    std::unordered_map<std::string, std::size_t> usernames;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(channels_in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            fail(channels_name, lineno, std::string("malformed JSON: ") + e.what());
        }
        ChannelRecord c = parse_channel_line(j, channels_name, lineno);
        if (index.count(c.id) != 0) {
            fail(channels_name, lineno, "duplicate channel id " + std::to_string(c.id));
        }
        if (c.username) {
            if (usernames.count(*c.username) != 0) {
                fail(channels_name, lineno, "duplicate username \"" + *c.username + "\"");
            }
            usernames[*c.username] = channels.size();
        }
        index[c.id] = channels.size();
        channels.push_back(std::move(c));
    }

    std::vector<std::vector<MessageRecord>> messages(channels.size());
    std::vector<std::unordered_set<std::int64_t>> seen_ids(channels.size());
    lineno = 0;
    while (std::getline(messages_in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            fail(messages_name, lineno, std::string("malformed JSON: ") + e.what());
        }
        MessageRecord m = parse_message_line(j, messages_name, lineno);
        const auto it = index.find(m.channel_id);
        if (it == index.end()) {
            fail(messages_name, lineno,
                 "message references unknown channel " + std::to_string(m.channel_id));
        }
        auto& seen = seen_ids[it->second];
        if (!seen.insert(m.message_id).second) {
            fail(messages_name, lineno,
                 "duplicate message id " + std::to_string(m.message_id) + " in channel " +
                     std::to_string(m.channel_id));
        }
        messages[it->second].push_back(std::move(m));
    }

    return Dataset(std::move(channels), std::move(messages));
}

Dataset parse_dataset(const std::string& channels_path, const std::string& messages_path) {
    std::ifstream channels(channels_path);
    if (!channels) throw ParseError(channels_path, 0, "cannot open file");
    std::ifstream messages(messages_path);
    if (!messages) throw ParseError(messages_path, 0, "cannot open file");
    return parse_dataset_streams(channels, messages, channels_path, messages_path);
}

void serialize_dataset_streams(const Dataset& ds, std::ostream& channels,
                               std::ostream& messages) {
    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        channels << to_json(ds.channel(i)).dump() << '\n';
    }
    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        for (const MessageRecord& m : ds.messages(i)) {
            messages << to_json(m).dump() << '\n';
        }
    }
}

void serialize_dataset(const Dataset& ds, const std::string& channels_path,
                       const std::string& messages_path) {
    std::ofstream channels(channels_path);
    if (!channels) throw std::runtime_error("cannot write " + channels_path);
    std::ofstream messages(messages_path);
    if (!messages) throw std::runtime_error("cannot write " + messages_path);
    serialize_dataset_streams(ds, channels, messages);
}

std::string channel_language(const Dataset& ds, std::size_t idx) {
    const ChannelRecord& c = ds.channel(idx);
    if (c.language && !c.language->empty()) return *c.language;
    std::vector<std::string_view> texts;
    for (const MessageRecord& m : ds.messages(idx)) {
        if (m.is_text()) texts.push_back(m.text);
    }
    if (texts.empty()) return "und";
    return text::detect_language(texts);
}

Cdf empirical_cdf(std::vector<double> values) {
    Cdf cdf;
    if (values.empty()) return cdf;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
        cdf.points.emplace_back(values[i], static_cast<double>(i + 1) / n);
    }
    return cdf;
}

ChannelStatsReport channel_stats(const Dataset& ds) {
    struct Raw {
        std::vector<double> subs, text, media, fwd_ratio;
    };
    Raw raw[3];

    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        const auto& msgs = ds.messages(i);
        std::size_t text_n = 0, media_n = 0, fwd_n = 0;
        for (const MessageRecord& m : msgs) {
            if (m.is_text()) ++text_n;
            else ++media_n;
            if (m.is_forwarded()) ++fwd_n;
        }
        const double ratio = msgs.empty() ? 0.0 : static_cast<double>(fwd_n) / msgs.size();
        Raw& r = raw[static_cast<int>(classify_channel(ds.channel(i)))];
        r.subs.push_back(static_cast<double>(ds.channel(i).subscribers));
        r.text.push_back(static_cast<double>(text_n));
        r.media.push_back(static_cast<double>(media_n));
        r.fwd_ratio.push_back(ratio);
    }

    const auto mean = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double s = 0;
        for (const double x : v) s += x;
        return s / static_cast<double>(v.size());
    };

    ChannelStatsReport report;
    ClassStats* out[3] = {&report.verified, &report.scam, &report.standard};
    for (int k = 0; k < 3; ++k) {
        out[k]->count = raw[k].subs.size();
        out[k]->mean_subscribers = mean(raw[k].subs);
        out[k]->mean_text = mean(raw[k].text);
        out[k]->mean_media = mean(raw[k].media);
        out[k]->mean_forwarded_ratio = mean(raw[k].fwd_ratio);
        out[k]->subscribers = empirical_cdf(std::move(raw[k].subs));
        out[k]->text_messages = empirical_cdf(std::move(raw[k].text));
        out[k]->media_messages = empirical_cdf(std::move(raw[k].media));
        out[k]->forwarded_ratio = empirical_cdf(std::move(raw[k].fwd_ratio));
    }
    return report;
}

}  // namespace chanalyze
