#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace chanalyze {

struct ForwardOrigin {
    std::optional<std::int64_t> from_channel_id;
    std::optional<std::string> from_name;
    std::int64_t from_date = 0;
    std::optional<std::string> author;  // stored, never used analytically

    friend bool operator==(const ForwardOrigin&, const ForwardOrigin&) = default;
};

enum class MessageKind { text, media };

struct MessageRecord {
    std::int64_t channel_id = 0;
    std::int64_t message_id = 0;
    std::int64_t date = 0;
    MessageKind kind = MessageKind::text;
    std::string text;         // kind == text
    std::string media_title;  // kind == media
    std::string media_format;
    std::optional<ForwardOrigin> fwd;

    bool is_text() const { return kind == MessageKind::text; }
    bool is_forwarded() const { return fwd.has_value(); }

    friend bool operator==(const MessageRecord&, const MessageRecord&) = default;
};

struct ChannelRecord {
    std::int64_t id = 0;
    std::optional<std::string> username;
    std::string title;
    std::string description;
    std::int64_t creation_date = 0;
    std::int64_t subscribers = 0;
    bool verified = false;
    bool scam = false;
    std::optional<std::string> language;

    friend bool operator==(const ChannelRecord&, const ChannelRecord&) = default;
};

enum class ChannelClass { verified, scam, standard };

inline ChannelClass classify_channel(const ChannelRecord& c) {
    if (c.verified) return ChannelClass::verified;
    if (c.scam) return ChannelClass::scam;
    return ChannelClass::standard;
}

class ParseError : public std::runtime_error {
 public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

 private:
    std::string file_;
    std::size_t line_;
};

// Channel archive. Immutable after construction; per-channel messages are
// sorted by (date, message_id).
class Dataset {
 public:
    Dataset() = default;
    Dataset(std::vector<ChannelRecord> channels,
            std::vector<std::vector<MessageRecord>> messages,
            std::optional<std::int64_t> reference_time = std::nullopt);

    std::size_t channel_count() const { return channels_.size(); }
    const std::vector<ChannelRecord>& channels() const { return channels_; }
    const ChannelRecord& channel(std::size_t idx) const { return channels_[idx]; }
    const std::vector<MessageRecord>& messages(std::size_t idx) const { return messages_[idx]; }

    std::optional<std::size_t> index_of(std::int64_t channel_id) const {
        const auto it = index_.find(channel_id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::int64_t reference_time() const { return reference_time_; }
    std::size_t total_messages() const { return total_messages_; }

    bool operator==(const Dataset& other) const {
        return channels_ == other.channels_ && messages_ == other.messages_ &&
               reference_time_ == other.reference_time_;
    }

 private:
    std::vector<ChannelRecord> channels_;
    std::vector<std::vector<MessageRecord>> messages_;  // parallel to channels_
    std::unordered_map<std::int64_t, std::size_t> index_;
    std::int64_t reference_time_ = 0;
    std::size_t total_messages_ = 0;
};

// Line-oriented JSON archives (one record per line, UTF-8, LF endings).
// Validation failures carry the offending file and line number.
Dataset parse_dataset(const std::string& channels_path, const std::string& messages_path);
Dataset parse_dataset_streams(std::istream& channels, std::istream& messages,
                              const std::string& channels_name = "<channels>",
                              const std::string& messages_name = "<messages>");

void serialize_dataset(const Dataset& ds, const std::string& channels_path,
                       const std::string& messages_path);
void serialize_dataset_streams(const Dataset& ds, std::ostream& channels,
                               std::ostream& messages);

// Archive-supplied labels take precedence; otherwise the stopword-profile
// detector runs over the channel's text messages.
std::string channel_language(const Dataset& ds, std::size_t idx);

// Empirical CDF as (value, cumulative fraction) at each distinct value.
struct Cdf {
    std::vector<std::pair<double, double>> points;
};

Cdf empirical_cdf(std::vector<double> values);

struct ClassStats {
    std::size_t count = 0;
    Cdf subscribers, text_messages, media_messages, forwarded_ratio;
    double mean_subscribers = 0, mean_text = 0, mean_media = 0, mean_forwarded_ratio = 0;
};

struct ChannelStatsReport {
    ClassStats verified, scam, standard;

    const ClassStats& of(ChannelClass c) const {
        switch (c) {
            case ChannelClass::verified: return verified;
            case ChannelClass::scam: return scam;
            default: return standard;
        }
    }
};

ChannelStatsReport channel_stats(const Dataset& ds);

}  // namespace chanalyze
