#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carguard/time.hpp"

namespace carguard::sim {

enum class Channel { SmsOut, SmsIn, Relay, State, Serial };

std::string_view to_string(Channel channel);
std::optional<Channel> parse_channel(std::string_view text);

struct TranscriptRecord {
    VirtualTime at;
    Channel channel;
    std::string detail;

    bool operator==(const TranscriptRecord&) const = default;
};

/// `t=<at> <channel> <detail>`
std::string format_record(const TranscriptRecord& record);

/// `{"at":<seconds>,"channel":"<name>","detail":"<text>"}` on one line.
std::string record_to_json(const TranscriptRecord& record);

/// JSON string literal (quotes included) for arbitrary bytes; used for SMS
/// bodies and raw serial traffic inside record details.
std::string quote(std::string_view bytes);

struct Transcript {
    std::string header;  // starts with '#', carries the run parameters
    std::vector<TranscriptRecord> records;
    bool horizon_exceeded = false;
    std::size_t pending_at_horizon = 0;

    /// Header line followed by one formatted record per line.
    [[nodiscard]] std::string serialize() const;
};

}  // namespace carguard::sim
