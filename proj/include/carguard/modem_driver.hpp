#pragma once

#include <deque>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "carguard/modem_emulator.hpp"
#include "carguard/result.hpp"
#include "carguard/sms.hpp"
#include "carguard/time.hpp"

namespace carguard::at {

struct ReadResult {
    std::string bytes;
    VirtualTime waited;  // virtual time spent blocking
};

/// Byte-level serial connection from the microcontroller side. `read`
/// blocks for at most `max_wait` virtual time and returns what arrived.
class SerialLink {
public:
    virtual ~SerialLink() = default;
    virtual void write(std::string_view bytes) = 0;
    virtual ReadResult read(VirtualTime max_wait) = 0;
};

/// Zero-latency link straight into a ModemEmulator. Unsolicited output from
/// deliveries is queued with `push_unsolicited` and read like any other byte.
class EmulatorLink final : public SerialLink {
public:
    enum class Direction { ToModem, FromModem };
    using Tap = std::function<void(Direction, std::string_view)>;

    explicit EmulatorLink(ModemEmulator& modem) : modem_(modem) {}

    void write(std::string_view bytes) override;
    ReadResult read(VirtualTime max_wait) override;

    void push_unsolicited(std::string_view bytes) { rx_ += bytes; }
    /// Observer for every chunk crossing the link (used for transcripts).
    void set_tap(Tap tap) { tap_ = std::move(tap); }

private:
    ModemEmulator& modem_;
    std::string rx_;
    Tap tap_;
};

enum class DriverError { Timeout, ModemError, ProtocolError };

std::string_view to_string(DriverError e);

/// Microcontroller-side modem client. Every command waits for its final
/// response for at most `timeout` of virtual time.
class ModemDriver {
public:
    explicit ModemDriver(SerialLink& link, std::string own_number,
                         VirtualTime timeout = VirtualTime::from_seconds(5));

    /// AT, ATE0, AT+CMGF=1, AT+CPMS="SM","SM","SM", AT+CNMI=2,1,0,0,0.
    Result<std::monostate, DriverError> initialize();

    /// Runs the CMGS prompt / Ctrl-Z dialogue. Returns the message reference.
    Result<int, DriverError> send_sms(std::string_view recipient, std::string_view body);

    /// Reads and deletes every message announced by +CMTI, in arrival order.
    Result<std::vector<SmsMessage>, DriverError> poll_inbox();

    [[nodiscard]] const std::deque<int>& pending_notifications() const { return notified_; }

private:
    struct Response {
        std::vector<std::string> lines;  // information lines, final excluded
        std::string final;
    };

    enum class Wait { Final, PromptOrFinal };

    Result<Response, DriverError> command(std::string_view text);
    Result<Response, DriverError> await(Wait mode, bool* prompted = nullptr);
    /// Moves complete CRLF lines out of the receive buffer, diverting +CMTI.
    void take_lines(std::vector<std::string>& lines);
    static Result<Response, DriverError> check_final(Response response);

    SerialLink& link_;
    std::string own_number_;
    VirtualTime timeout_;
    std::string rx_;
    std::deque<int> notified_;
};

}  // namespace carguard::at
