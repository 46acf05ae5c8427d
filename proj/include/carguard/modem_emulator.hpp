#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "carguard/at_protocol.hpp"
#include "carguard/result.hpp"
#include "carguard/sms.hpp"
#include "carguard/time.hpp"

namespace carguard::at {

enum class DeliverError { StorageFull };

/// Plays the SIM300 side of the serial line. Implements AT, ATE0/ATE1,
/// AT+CNMI, AT+CPMS, AT+CMGF, AT+CMGR, AT+CMGS and AT+CMGD in text mode only.
///
/// Input is processed byte by byte: in command phase a CR dispatches the
/// buffered line; after `AT+CMGS="<num>"` the modem prompts with "\r\n> " and
/// collects the body until Ctrl-Z (send) or ESC (abort).
class ModemEmulator {
public:
    explicit ModemEmulator(std::string subscriber_number);

    /// Consumes serial input and returns everything the modem writes back.
    std::string feed(std::string_view bytes);

    /// Stores an inbound SMS in the lowest free slot as REC UNREAD. Returns
    /// the unsolicited +CMTI line when new-message indication is enabled.
    Result<std::string, DeliverError> deliver(const SmsMessage& message);

    /// Messages committed by AT+CMGS since the last call, oldest first.
    std::vector<SmsMessage> take_outbox();

    /// Clock used to stamp outbound messages.
    void set_time(VirtualTime now) { now_ = now; }

    [[nodiscard]] const ModemState& state() const { return state_; }
    [[nodiscard]] const std::string& subscriber_number() const { return subscriber_; }
    [[nodiscard]] bool in_body_phase() const { return phase_ == Phase::SmsBody; }

private:
    enum class Phase { Command, SmsBody };

    static constexpr std::size_t kMaxLine = 556;

    void feed_command_byte(char c, std::string& out);
    void feed_body_byte(char c, std::string& out);
    std::string execute(std::string_view line);

    std::string cmd_cnmi(std::string_view suffix);
    std::string cmd_cpms(std::string_view suffix);
    std::string cmd_cmgf(std::string_view suffix);
    std::string cmd_cmgr(std::string_view suffix);
    std::string cmd_cmgs(std::string_view suffix);
    std::string cmd_cmgd(std::string_view suffix);
    std::string commit_body();

    std::string subscriber_;
    ModemState state_;
    Phase phase_ = Phase::Command;
    std::string line_;
    bool line_overflow_ = false;
    std::string body_;
    std::string pending_recipient_;
    std::vector<SmsMessage> outbox_;
    VirtualTime now_;
};

}  // namespace carguard::at
