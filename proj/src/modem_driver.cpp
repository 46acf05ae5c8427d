#include "carguard/modem_driver.hpp"

#include <charconv>
#include <optional>

namespace carguard::at {

namespace {

std::optional<int> parse_trailing_int(std::string_view text) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

/// Splits on commas outside double quotes and strips the quotes.
std::optional<std::vector<std::string>> split_quoted(std::string_view text) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (char c : text) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) return std::nullopt;
    return out;
}

Result<SmsMessage, DriverError> decode_cmgr(const std::vector<std::string>& lines, const std::string& own_number) {
    std::size_t header = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].starts_with("+CMGR: ")) {
            header = i;
            break;
        }
    }
    if (header + 1 >= lines.size()) return make_error(DriverError::ProtocolError, "CMGR response without header/body");

    auto fields = split_quoted(std::string_view(lines[header]).substr(7));
    if (!fields || fields->size() < 4) return make_error(DriverError::ProtocolError, "bad CMGR header: " + lines[header]);
    const auto& status = (*fields)[0];
    const auto& sender = (*fields)[1];
    if (status != "REC UNREAD" && status != "REC READ") {
        return make_error(DriverError::ProtocolError, "bad CMGR status: " + status);
    }
    if (!is_phone_number(sender)) return make_error(DriverError::ProtocolError, "bad CMGR sender: " + sender);
    auto stamp = parse_sms_timestamp((*fields)[3]);
    if (!stamp) return make_error(DriverError::ProtocolError, "bad CMGR timestamp: " + (*fields)[3]);

    const auto& body = lines[header + 1];
    if (!is_valid_body(body)) return make_error(DriverError::ProtocolError, "bad CMGR body line");
    return SmsMessage{sender, own_number, body, *stamp};
}

}  // namespace

void EmulatorLink::write(std::string_view bytes) {
    if (tap_) tap_(Direction::ToModem, bytes);
    rx_ += modem_.feed(bytes);
}

ReadResult EmulatorLink::read(VirtualTime max_wait) {
    if (rx_.empty()) return ReadResult{{}, max_wait};
    std::string out;
    out.swap(rx_);
    if (tap_) tap_(Direction::FromModem, out);
    return ReadResult{std::move(out), VirtualTime{}};
}

std::string_view to_string(DriverError e) {
    switch (e) {
        case DriverError::Timeout: return "Timeout";
        case DriverError::ModemError: return "ModemError";
        case DriverError::ProtocolError: return "ProtocolError";
    }
    return "Unknown";
}

ModemDriver::ModemDriver(SerialLink& link, std::string own_number, VirtualTime timeout)
    : link_(link), own_number_(std::move(own_number)), timeout_(timeout) {}

Result<std::monostate, DriverError> ModemDriver::initialize() {
    for (std::string_view cmd : {"AT", "ATE0", "AT+CMGF=1", "AT+CPMS=\"SM\",\"SM\",\"SM\"", "AT+CNMI=2,1,0,0,0"}) {
        auto r = command(cmd);
        if (!r) return r.error();
    }
    return std::monostate{};
}

Result<int, DriverError> ModemDriver::send_sms(std::string_view recipient, std::string_view body) {
    if (!is_phone_number(recipient)) {
        return make_error(DriverError::ProtocolError, "invalid recipient " + std::string(recipient));
    }
    if (!is_valid_body(body)) return make_error(DriverError::ProtocolError, "invalid SMS body");

    link_.write("AT+CMGS=\"" + std::string(recipient) + "\"\r");
    bool prompted = false;
    auto head = await(Wait::PromptOrFinal, &prompted);
    if (!head) return head.error();
    if (!prompted) {
        auto checked = check_final(std::move(head).value());
        if (!checked) return checked.error();
        return make_error(DriverError::ProtocolError, "CMGS completed without a prompt");
    }

    std::string payload(body);
    payload += kCtrlZ;
    link_.write(payload);
    auto tail = await(Wait::Final);
    if (!tail) return tail.error();
    auto checked = check_final(std::move(tail).value());
    if (!checked) return checked.error();
    for (const auto& line : checked->lines) {
        if (!line.starts_with("+CMGS: ")) continue;
        if (auto mr = parse_trailing_int(std::string_view(line).substr(7))) return *mr;
        return make_error(DriverError::ProtocolError, "bad CMGS reference: " + line);
    }
    return make_error(DriverError::ProtocolError, "CMGS OK without message reference");
}

Result<std::vector<SmsMessage>, DriverError> ModemDriver::poll_inbox() {
    auto pending = link_.read(VirtualTime{});
    rx_ += pending.bytes;
    std::vector<std::string> stray;
    take_lines(stray);

    std::vector<SmsMessage> messages;
    while (!notified_.empty()) {
        const int index = notified_.front();
        notified_.pop_front();
        auto read = command("AT+CMGR=" + std::to_string(index));
        if (!read) return read.error();
        auto message = decode_cmgr(read->lines, own_number_);
        if (!message) return message.error();
        auto del = command("AT+CMGD=" + std::to_string(index));
        if (!del) return del.error();
        messages.push_back(std::move(message).value());
    }
    return messages;
}

Result<ModemDriver::Response, DriverError> ModemDriver::command(std::string_view text) {
    std::string line(text);
    line += '\r';
    link_.write(line);
    auto response = await(Wait::Final);
    if (!response) return response.error();
    return check_final(std::move(response).value());
}

Result<ModemDriver::Response, DriverError> ModemDriver::check_final(Response response) {
    if (response.final == "OK") return response;
    return make_error(DriverError::ModemError, response.final);
}

void ModemDriver::take_lines(std::vector<std::string>& lines) {
    std::size_t start = 0;
    while (true) {
        const auto end = rx_.find("\r\n", start);
        if (end == std::string::npos) break;
        std::string line = rx_.substr(start, end - start);
        start = end + 2;
        if (line.empty()) continue;
        if (line.starts_with("+CMTI: ")) {
            const auto comma = line.rfind(',');
            if (comma != std::string::npos) {
                if (auto index = parse_trailing_int(std::string_view(line).substr(comma + 1))) {
                    notified_.push_back(*index);
                }
            }
            continue;
        }
        lines.push_back(std::move(line));
    }
    rx_.erase(0, start);
}

Result<ModemDriver::Response, DriverError> ModemDriver::await(Wait mode, bool* prompted) {
    Response response;
    std::vector<std::string> lines;
    VirtualTime waited{};
    while (true) {
        lines.clear();
        take_lines(lines);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (is_final_response(lines[i])) {
                response.final = lines[i];
                // Anything after the final response is stray; only +CMTI
                // lines (already diverted) are expected there.
                return response;
            }
            response.lines.push_back(std::move(lines[i]));
        }
        if (mode == Wait::PromptOrFinal && rx_.ends_with("> ")) {
            rx_.clear();
            if (prompted) *prompted = true;
            return response;
        }
        if (waited >= timeout_) {
            return make_error(DriverError::Timeout, "no final response within " + timeout_.to_string() + " s");
        }
        auto chunk = link_.read(timeout_ - waited);
        // A silent read consumes the whole remaining budget.
        waited += chunk.bytes.empty() ? timeout_ - waited : chunk.waited;
        rx_ += chunk.bytes;
    }
}

}  // namespace carguard::at
