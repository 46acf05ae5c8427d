#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "carguard/sms.hpp"
#include "carguard/time.hpp"

/// Shared definitions for the text-mode AT command dialect spoken between
/// the modem emulator and the modem driver.
namespace carguard::at {

inline constexpr std::size_t kStorageCapacity = 20;

inline constexpr char kCtrlZ = '\x1A';
inline constexpr char kEsc = '\x1B';

// +CMS ERROR codes used by this dialect.
inline constexpr int kCmsInvalidIndex = 321;
inline constexpr int kCmsGeneralError = 500;

/// Every response line is framed as CRLF + text + CRLF.
std::string frame(std::string_view text);

inline const std::string kOk = "\r\nOK\r\n";
inline const std::string kError = "\r\nERROR\r\n";
inline const std::string kPrompt = "\r\n> ";

std::string cms_error(int code);

enum class SlotStatus { Empty, RecUnread, RecRead };

std::string_view to_string(SlotStatus status);

struct SmsSlot {
    int index = 0;
    SlotStatus status = SlotStatus::Empty;
    std::optional<SmsMessage> message;
};

struct ModemState {
    bool echo = true;
    bool text_mode = false;
    bool cnmi_notify = false;
    std::array<SmsSlot, kStorageCapacity> storage{};
    std::uint8_t next_mr = 0;

    ModemState();
    [[nodiscard]] std::size_t used_slots() const;
};

/// "YY/MM/DD,hh:mm:ss+00" in UTC; fractional seconds are truncated.
std::string format_sms_timestamp(VirtualTime t);
std::optional<VirtualTime> parse_sms_timestamp(std::string_view text);

/// True for OK, ERROR, +CMS ERROR: n and +CME ERROR: n.
bool is_final_response(std::string_view line);

}  // namespace carguard::at
