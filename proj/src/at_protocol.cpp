#include "carguard/at_protocol.hpp"

#include <charconv>
#include <cstdio>

namespace carguard::at {

std::string frame(std::string_view text) {
    std::string out = "\r\n";
    out += text;
    out += "\r\n";
    return out;
}

std::string cms_error(int code) { return frame("+CMS ERROR: " + std::to_string(code)); }

std::string_view to_string(SlotStatus status) {
    switch (status) {
        case SlotStatus::Empty: return "";
        case SlotStatus::RecUnread: return "REC UNREAD";
        case SlotStatus::RecRead: return "REC READ";
    }
    return "";
}

ModemState::ModemState() {
    for (std::size_t i = 0; i < storage.size(); ++i) storage[i].index = static_cast<int>(i + 1);
}

std::size_t ModemState::used_slots() const {
    std::size_t used = 0;
    for (const auto& slot : storage) used += slot.status != SlotStatus::Empty;
    return used;
}

std::string format_sms_timestamp(VirtualTime t) {
    const auto c = to_civil(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02d/%02u/%02u,%02u:%02u:%02u+00", c.year % 100, c.month, c.day, c.hour, c.minute,
                  c.second);
    return buf;
}

std::optional<VirtualTime> parse_sms_timestamp(std::string_view text) {
    // YY/MM/DD,hh:mm:ss+00
    if (text.size() != 20) return std::nullopt;
    constexpr std::string_view kShape = "00/00/00,00:00:00+00";
    unsigned parts[6] = {};
    for (std::size_t i = 0; i < kShape.size(); ++i) {
        const bool digit_expected = kShape[i] == '0';
        const bool is_digit = text[i] >= '0' && text[i] <= '9';
        if (digit_expected != is_digit) return std::nullopt;
        if (!digit_expected && text[i] != kShape[i]) return std::nullopt;
    }
    if (text.substr(18) != "00") return std::nullopt;
    for (std::size_t p = 0; p < 6; ++p) {
        std::from_chars(text.data() + p * 3, text.data() + p * 3 + 2, parts[p]);
    }
    return from_civil(CivilTime{2000 + static_cast<int>(parts[0]), parts[1], parts[2], parts[3], parts[4], parts[5], 0});
}

bool is_final_response(std::string_view line) {
    return line == "OK" || line == "ERROR" || line.starts_with("+CMS ERROR:") || line.starts_with("+CME ERROR:");
}

}  // namespace carguard::at
