#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carguard/result.hpp"
#include "carguard/time.hpp"

namespace carguard {

/// Sensor locations, in their canonical reporting order.
enum class IntrusionKind { Door, Bonnet, Trunk };

inline constexpr IntrusionKind kAllIntrusionKinds[] = {IntrusionKind::Door, IntrusionKind::Bonnet,
                                                       IntrusionKind::Trunk};

std::string_view to_string(IntrusionKind kind);
/// Case-insensitive "DOOR" / "BONNET" / "TRUNK".
std::optional<IntrusionKind> parse_intrusion_kind(std::string_view text);

enum class VehicleError { TiltOutOfRange, EmptyTrack };

// ---------------------------------------------------------------------------
// Mercury tilt switches

struct SwitchConfig {
    double close_threshold_deg = 30.0;
    double hysteresis_deg = 5.0;  // reopens only below threshold - hysteresis
    VirtualTime debounce = VirtualTime::from_millis(200);
};

struct SensorEvent {
    IntrusionKind kind;
    bool closed;
    VirtualTime at;

    bool operator==(const SensorEvent&) const = default;
};

/// `contact` follows the hysteresis band immediately; `closed` is the
/// debounced state that has been reported to the controller.
struct MercurySwitch {
    IntrusionKind location = IntrusionKind::Door;
    SwitchConfig config;
    double tilt_deg = 0.0;
    bool contact = false;
    bool closed = false;
    std::optional<VirtualTime> last_transition;
};

struct TiltOutcome {
    MercurySwitch sw;
    std::optional<SensorEvent> event;
};

/// Moves the switch to a new tilt. An event is produced only when the
/// contact state differs from the reported state and the debounce window
/// since the last reported transition has elapsed.
Result<TiltOutcome, VehicleError> set_tilt(MercurySwitch sw, double tilt_deg, VirtualTime now);

// ---------------------------------------------------------------------------
// Relays

enum class RelayAction { Lock, Seize, Cut };

std::string_view to_string(RelayAction action);

/// Latching relays: gear lock, engine seize, fuel/supply cut.
struct RelayBank {
    bool gear_lock = false;
    bool engine_seize = false;
    bool supply_cut = false;

    bool operator==(const RelayBank&) const = default;
};

/// Sets the flag for `action`. Never clears a flag.
RelayBank apply_relay(RelayBank bank, RelayAction action);

/// "gear_lock=on engine_seize=off supply_cut=off"
std::string describe(const RelayBank& bank);

// ---------------------------------------------------------------------------
// GPS receiver

struct Waypoint {
    VirtualTime at;
    double latitude = 0.0;
    double longitude = 0.0;
    bool valid = true;
};

struct TrackSample {
    double latitude = 0.0;
    double longitude = 0.0;
    bool valid = false;
    double speed_knots = 0.0;
    double course_deg = 0.0;
};

/// Position track replayed as an NMEA stream at one RMC+GGA pair per second.
class GpsSource {
public:
    GpsSource() = default;
    explicit GpsSource(std::vector<Waypoint> track);

    /// Inserts keeping the track ordered by time (stable for equal times).
    void add(const Waypoint& waypoint);
    [[nodiscard]] const std::vector<Waypoint>& track() const { return track_; }

    /// Linear interpolation between the surrounding waypoints; validity comes
    /// from the earlier one. Clamps to the first/last waypoint outside the track.
    [[nodiscard]] Result<TrackSample, VehicleError> sample(VirtualTime at) const;

    /// RMC then GGA for the whole second containing `now`, CRLF-terminated.
    [[nodiscard]] Result<std::vector<std::string>, VehicleError> emit(VirtualTime now) const;

private:
    std::vector<Waypoint> track_;
};

}  // namespace carguard
