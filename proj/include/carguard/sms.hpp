#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "carguard/time.hpp"

namespace carguard {

inline constexpr std::size_t kMaxSmsBody = 160;

struct SmsMessage {
    std::string sender;
    std::string recipient;
    std::string body;
    VirtualTime sent_at;

    bool operator==(const SmsMessage&) const = default;
};

/// E.164-style: optional leading '+', then 3..15 digits.
bool is_phone_number(std::string_view number);

/// Body length ≤ 160 with no Ctrl-Z or CR bytes.
bool is_valid_body(std::string_view body);

}  // namespace carguard
