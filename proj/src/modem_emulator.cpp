#include "carguard/modem_emulator.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace carguard::at {

namespace {

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::optional<int> parse_int(std::string_view s) {
    if (s.empty() || s.size() > 6) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || value < 0) return std::nullopt;
    return value;
}

/// Splits "+CMGR=3" style suffixes: returns the text after '=' or nullopt if
/// the suffix is not a set command.
std::optional<std::string_view> set_argument(std::string_view suffix) {
    if (suffix.empty() || suffix.front() != '=') return std::nullopt;
    suffix.remove_prefix(1);
    if (suffix == "?") return std::nullopt;  // test form, unsupported
    return suffix;
}

}  // namespace

ModemEmulator::ModemEmulator(std::string subscriber_number) : subscriber_(std::move(subscriber_number)) {}

std::string ModemEmulator::feed(std::string_view bytes) {
    std::string out;
    for (char c : bytes) {
        if (phase_ == Phase::Command) {
            feed_command_byte(c, out);
        } else {
            feed_body_byte(c, out);
        }
    }
    return out;
}

void ModemEmulator::feed_command_byte(char c, std::string& out) {
    if (state_.echo) out += c;
    if (c == '\n') return;
    if (c != '\r') {
        if (line_.size() < kMaxLine) {
            line_ += c;
        } else {
            line_overflow_ = true;
        }
        return;
    }
    std::string line = std::move(line_);
    line_.clear();
    const bool overflow = line_overflow_;
    line_overflow_ = false;
    if (line.empty() && !overflow) return;
    out += overflow ? kError : execute(line);
}

void ModemEmulator::feed_body_byte(char c, std::string& out) {
    switch (c) {
        case kCtrlZ:
            out += commit_body();
            return;
        case kEsc:
            phase_ = Phase::Command;
            body_.clear();
            pending_recipient_.clear();
            out += kOk;
            return;
        case '\r':
            body_ += '\n';
            out += kPrompt;
            return;
        case '\n':
            return;
        default:
            if (state_.echo) out += c;
            if (body_.size() <= kMaxSmsBody) body_ += c;
            return;
    }
}

std::string ModemEmulator::execute(std::string_view line) {
    const std::string upper = to_upper(line);
    if (!upper.starts_with("AT")) return kError;
    if (upper == "AT") return kOk;
    if (upper == "ATE0" || upper == "ATE") {
        state_.echo = false;
        return kOk;
    }
    if (upper == "ATE1") {
        state_.echo = true;
        return kOk;
    }
    if (!upper.starts_with("AT+")) return kError;

    const auto name_end = upper.find_first_of("=?", 3);
    const std::string name = upper.substr(3, name_end == std::string::npos ? std::string::npos : name_end - 3);
    // Keep the original casing of arguments (phone numbers are case-free, but
    // quoted text should not be altered).
    const std::string_view suffix = name_end == std::string::npos ? std::string_view{} : line.substr(name_end);

    if (name == "CNMI") return cmd_cnmi(suffix);
    if (name == "CPMS") return cmd_cpms(suffix);
    if (name == "CMGF") return cmd_cmgf(suffix);
    if (name == "CMGR") return cmd_cmgr(suffix);
    if (name == "CMGS") return cmd_cmgs(suffix);
    if (name == "CMGD") return cmd_cmgd(suffix);
    return kError;
}

std::string ModemEmulator::cmd_cnmi(std::string_view suffix) {
    if (suffix == "?") return frame(state_.cnmi_notify ? "+CNMI: 2,1,0,0,0" : "+CNMI: 0,0,0,0,0") + kOk;
    auto arg = set_argument(suffix);
    if (!arg) return kError;
    state_.cnmi_notify = true;
    return kOk;
}

std::string ModemEmulator::cmd_cpms(std::string_view suffix) {
    const auto used = std::to_string(state_.used_slots());
    const auto cap = std::to_string(kStorageCapacity);
    if (suffix == "?") {
        const auto one = "\"SM\"," + used + "," + cap;
        return frame("+CPMS: " + one + "," + one + "," + one) + kOk;
    }
    auto arg = set_argument(suffix);
    if (!arg) return kError;
    const auto one = used + "," + cap;
    return frame("+CPMS: " + one + "," + one + "," + one) + kOk;
}

std::string ModemEmulator::cmd_cmgf(std::string_view suffix) {
    if (suffix == "?") return frame(state_.text_mode ? "+CMGF: 1" : "+CMGF: 0") + kOk;
    auto arg = set_argument(suffix);
    if (!arg || *arg != "1") return kError;  // PDU mode (0) is not supported
    state_.text_mode = true;
    return kOk;
}

std::string ModemEmulator::cmd_cmgr(std::string_view suffix) {
    auto arg = set_argument(suffix);
    if (!arg) return kError;
    auto index = parse_int(*arg);
    if (!index) return kError;
    if (*index < 1 || *index > static_cast<int>(kStorageCapacity)) return cms_error(kCmsInvalidIndex);
    auto& slot = state_.storage[static_cast<std::size_t>(*index - 1)];
    if (slot.status == SlotStatus::Empty || !slot.message) return cms_error(kCmsInvalidIndex);

    const auto& msg = *slot.message;
    // Header line, then the body on its own line, then the final response.
    std::string out = frame("+CMGR: \"" + std::string(to_string(slot.status)) + "\",\"" + msg.sender + "\",,\"" +
                            format_sms_timestamp(msg.sent_at) + "\"");
    out += msg.body;
    out += "\r\n";
    out += kOk;
    slot.status = SlotStatus::RecRead;
    return out;
}

std::string ModemEmulator::cmd_cmgs(std::string_view suffix) {
    auto arg = set_argument(suffix);
    if (!arg) return kError;
    // "<number>" optionally followed by ,<type-of-address>
    std::string_view text = *arg;
    if (text.size() < 2 || text.front() != '"') return kError;
    const auto close = text.find('"', 1);
    if (close == std::string_view::npos) return kError;
    const auto number = text.substr(1, close - 1);
    const auto rest = text.substr(close + 1);
    if (!rest.empty() && (rest.front() != ',' || !parse_int(rest.substr(1)))) return kError;
    if (!is_phone_number(number)) return kError;
    if (!state_.text_mode) return cms_error(kCmsGeneralError);

    pending_recipient_ = std::string(number);
    body_.clear();
    phase_ = Phase::SmsBody;
    return kPrompt;
}

std::string ModemEmulator::cmd_cmgd(std::string_view suffix) {
    auto arg = set_argument(suffix);
    if (!arg) return kError;
    std::string_view text = *arg;
    const auto comma = text.find(',');
    if (comma != std::string_view::npos) {
        auto flag = parse_int(text.substr(comma + 1));
        if (!flag || *flag != 0) return kError;
        text = text.substr(0, comma);
    }
    auto index = parse_int(text);
    if (!index) return kError;
    if (*index < 1 || *index > static_cast<int>(kStorageCapacity)) return cms_error(kCmsInvalidIndex);
    auto& slot = state_.storage[static_cast<std::size_t>(*index - 1)];
    slot.status = SlotStatus::Empty;
    slot.message.reset();
    return kOk;
}

std::string ModemEmulator::commit_body() {
    phase_ = Phase::Command;
    std::string body = std::move(body_);
    body_.clear();
    std::string recipient = std::move(pending_recipient_);
    pending_recipient_.clear();
    if (!is_valid_body(body)) return cms_error(kCmsGeneralError);

    outbox_.push_back(SmsMessage{subscriber_, std::move(recipient), std::move(body), now_});
    const auto mr = state_.next_mr;
    state_.next_mr = static_cast<std::uint8_t>(mr + 1);
    return frame("+CMGS: " + std::to_string(mr)) + kOk;
}

Result<std::string, DeliverError> ModemEmulator::deliver(const SmsMessage& message) {
    for (auto& slot : state_.storage) {
        if (slot.status != SlotStatus::Empty) continue;
        slot.status = SlotStatus::RecUnread;
        slot.message = message;
        if (!state_.cnmi_notify) return std::string{};
        return frame("+CMTI: \"SM\"," + std::to_string(slot.index));
    }
    return make_error(DeliverError::StorageFull, "SMS storage full, dropped message from " + message.sender);
}

std::vector<SmsMessage> ModemEmulator::take_outbox() {
    std::vector<SmsMessage> out;
    out.swap(outbox_);
    return out;
}

}  // namespace carguard::at
