#pragma once

#include <string>
#include <vector>

#include "chanalyze/data_model.hpp"

namespace chanalyze::testing {

inline ChannelRecord make_channel(std::int64_t id, std::string title = "",
                                  std::string language = "en") {
    ChannelRecord c;
    c.id = id;
    c.title = title.empty() ? "Channel " + std::to_string(id) : std::move(title);
    c.description = "desc " + std::to_string(id);
    c.username = "user" + std::to_string(id);
    c.creation_date = 1'000'000;
    c.subscribers = 100;
    if (!language.empty()) c.language = language;
    return c;
}

inline MessageRecord make_text(std::int64_t channel_id, std::int64_t message_id, std::int64_t date,
                               std::string text) {
    MessageRecord m;
    m.channel_id = channel_id;
    m.message_id = message_id;
    m.date = date;
    m.kind = MessageKind::text;
    m.text = std::move(text);
    return m;
}

inline MessageRecord make_media(std::int64_t channel_id, std::int64_t message_id,
                                std::int64_t date, std::string title = "pic",
                                std::string format = "jpg") {
    MessageRecord m;
    m.channel_id = channel_id;
    m.message_id = message_id;
    m.date = date;
    m.kind = MessageKind::media;
    m.media_title = std::move(title);
    m.media_format = std::move(format);
    return m;
}

inline MessageRecord with_fwd(MessageRecord m, std::optional<std::int64_t> origin,
                              std::int64_t from_date,
                              std::optional<std::string> name = std::nullopt) {
    ForwardOrigin f;
    f.from_channel_id = origin;
    f.from_name = std::move(name);
    f.from_date = from_date;
    m.fwd = std::move(f);
    return m;
}

// Groups a flat message list by channel and builds the dataset.
inline Dataset build_dataset(std::vector<ChannelRecord> channels,
                             const std::vector<MessageRecord>& flat) {
    std::vector<std::vector<MessageRecord>> grouped(channels.size());
    for (const MessageRecord& m : flat) {
        for (std::size_t i = 0; i < channels.size(); ++i) {
            if (channels[i].id == m.channel_id) {
                grouped[i].push_back(m);
                break;
            }
        }
    }
    return Dataset(std::move(channels), std::move(grouped));
}

}  // namespace chanalyze::testing
