#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "carguard/result.hpp"
#include "carguard/time.hpp"
#include "carguard/vehicle.hpp"

namespace carguard::sim {

namespace action {
struct Arm {
    bool operator==(const Arm&) const = default;
};
struct Disarm {
    bool operator==(const Disarm&) const = default;
};
struct Tilt {
    IntrusionKind kind;
    double degrees;
    bool operator==(const Tilt&) const = default;
};
struct OwnerSms {
    std::string from;
    std::string body;
    bool operator==(const OwnerSms&) const = default;
};
struct GpsWaypoint {
    double latitude;
    double longitude;
    bool valid;
    bool operator==(const GpsWaypoint&) const = default;
};
struct ReleaseRelays {
    bool operator==(const ReleaseRelays&) const = default;
};
}  // namespace action

/// An external stimulus: local arm/disarm, a tilt change, an SMS typed by a
/// phone user, a GPS waypoint, or a local relay release.
using Action = std::variant<action::Arm, action::Disarm, action::Tilt, action::OwnerSms, action::GpsWaypoint,
                            action::ReleaseRelays>;

/// Renders an action back in scenario-file syntax (without the timestamp).
std::string describe(const Action& action);

struct ScenarioEvent {
    VirtualTime at;
    Action action;

    bool operator==(const ScenarioEvent&) const = default;
};

enum class ScenarioError { Syntax, Unsorted };

/// Line format `<at> <action> [args...]`:
///
///     0   arm
///     5   tilt DOOR 45
///     40  owner_sms +923001234567 LOCK
///     60  gps_waypoint 24.8700 67.0200 1
///     100 disarm
///     120 release_relays
///
/// Lines whose first non-blank character is `#` are comments; blank lines are
/// skipped. `<at>` is decimal seconds with at most millisecond precision.
/// Timestamps must be nondecreasing. Errors read "line N: reason".
Result<std::vector<ScenarioEvent>, ScenarioError> parse_scenario(std::string_view text);

}  // namespace carguard::sim
