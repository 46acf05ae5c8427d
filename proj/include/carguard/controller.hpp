#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "carguard/nmea.hpp"
#include "carguard/result.hpp"
#include "carguard/sms.hpp"
#include "carguard/time.hpp"
#include "carguard/vehicle.hpp"

/// Intrusion/theft control logic as pure transitions:
/// (state, event, now) -> (state, effects).
///
///   DISARMED --arm--> ARMED --sensor--> ALERTING --LOCK/SEIZE/CUT--> POST_ACTION
///        ^                                  |                            |
///        +------------- DISARM -------------+----------------------------+
///
/// ALERTING repeats the alert and POST_ACTION sends location updates, both on
/// a fixed 30 s cadence anchored at the first alert.
namespace carguard::control {

inline constexpr VirtualTime kRepeatInterval = VirtualTime::from_seconds(30);
inline constexpr std::size_t kMaxWhitelist = 5;

enum class Phase { Disarmed, Armed, Alerting, PostAction };

std::string_view to_string(Phase phase);

enum class Verb { Lock, Seize, Cut, Disarm, Status };

std::string_view to_string(Verb verb);

/// First whitespace-delimited token of the body, case-insensitive.
std::optional<Verb> parse_command(std::string_view body);

struct ControllerState {
    Phase phase = Phase::Disarmed;
    std::set<IntrusionKind> intrusions;
    std::vector<std::string> whitelist;
    std::optional<nmea::GpsFix> last_fix;
    std::optional<VirtualTime> next_sms_deadline;
    RelayBank relays;

    bool operator==(const ControllerState&) const = default;
};

enum class ConfigError { EmptyWhitelist, TooManyNumbers, BadNumber, DuplicateNumber };

/// A disarmed controller with a validated whitelist (1..5 distinct numbers).
Result<ControllerState, ConfigError> make_controller(std::vector<std::string> whitelist);

struct AlertMessage {
    int catalog_id;  // bitmask of kinds for alerts (DOOR=1, BONNET=2, TRUNK=4); 0 for updates
    std::string text;
};

AlertMessage compose_alert(const ControllerState& state);
AlertMessage compose_update(const ControllerState& state);
std::string compose_status(const ControllerState& state);

struct OutboundSms {
    std::string recipient;
    std::string body;

    bool operator==(const OutboundSms&) const = default;
};

struct RelayDirective {
    RelayAction action;
    std::string authorized_by;
};

struct Step {
    ControllerState state;
    std::vector<OutboundSms> sms;
    std::vector<RelayDirective> relays;
};

enum class ArmError { EmptyWhitelist, AlreadyArmed };

Result<ControllerState, ArmError> arm(ControllerState state);

/// Local disarm from the console or harness: clears the timer and
/// intrusions, sends nothing. Relays stay latched.
ControllerState disarm(ControllerState state);

/// Explicit release of every latched relay (local action only).
ControllerState release_relays(ControllerState state);

/// `kind` must already be debounced.
Step on_sensor(ControllerState state, IntrusionKind kind, VirtualTime now);

Step on_owner_sms(ControllerState state, const SmsMessage& message, VirtualTime now);

Step tick(ControllerState state, VirtualTime now);

/// Valid fixes replace the last known fix; invalid ones are ignored.
ControllerState on_gps(ControllerState state, const nmea::GpsFix& fix);

}  // namespace carguard::control
