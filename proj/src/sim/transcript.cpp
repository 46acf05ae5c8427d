#include "carguard/sim/transcript.hpp"

#include <json.hpp>

namespace carguard::sim {

std::string_view to_string(Channel channel) {
    switch (channel) {
        case Channel::SmsOut: return "SMS_OUT";
        case Channel::SmsIn: return "SMS_IN";
        case Channel::Relay: return "RELAY";
        case Channel::State: return "STATE";
        case Channel::Serial: return "SERIAL";
    }
    return "?";
}

std::optional<Channel> parse_channel(std::string_view text) {
    for (auto c : {Channel::SmsOut, Channel::SmsIn, Channel::Relay, Channel::State, Channel::Serial}) {
        if (text == to_string(c)) return c;
    }
    return std::nullopt;
}

std::string format_record(const TranscriptRecord& record) {
    std::string out = "t=" + record.at.to_string() + " ";
    out += to_string(record.channel);
    out += ' ';
    out += record.detail;
    return out;
}

std::string quote(std::string_view bytes) {
    return nlohmann::json(std::string(bytes)).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string record_to_json(const TranscriptRecord& record) {
    nlohmann::ordered_json j;
    j["at"] = record.at.seconds();
    j["channel"] = to_string(record.channel);
    j["detail"] = record.detail;
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string Transcript::serialize() const {
    std::string out = header;
    out += '\n';
    for (const auto& r : records) {
        out += format_record(r);
        out += '\n';
    }
    return out;
}

}  // namespace carguard::sim
