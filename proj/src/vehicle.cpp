#include "carguard/vehicle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "carguard/nmea.hpp"

namespace carguard {

std::string_view to_string(IntrusionKind kind) {
    switch (kind) {
        case IntrusionKind::Door: return "DOOR";
        case IntrusionKind::Bonnet: return "BONNET";
        case IntrusionKind::Trunk: return "TRUNK";
    }
    return "?";
}

std::optional<IntrusionKind> parse_intrusion_kind(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto kind : kAllIntrusionKinds) {
        if (upper == to_string(kind)) return kind;
    }
    return std::nullopt;
}

Result<TiltOutcome, VehicleError> set_tilt(MercurySwitch sw, double tilt_deg, VirtualTime now) {
    if (!(tilt_deg >= 0.0 && tilt_deg <= 180.0)) {
        return make_error(VehicleError::TiltOutOfRange, "tilt " + std::to_string(tilt_deg) + " outside [0, 180]");
    }
    sw.tilt_deg = tilt_deg;
    if (sw.contact) {
        sw.contact = tilt_deg >= sw.config.close_threshold_deg - sw.config.hysteresis_deg;
    } else {
        sw.contact = tilt_deg >= sw.config.close_threshold_deg;
    }

    TiltOutcome outcome{sw, std::nullopt};
    if (sw.contact == sw.closed) return outcome;
    if (sw.last_transition && now - *sw.last_transition < sw.config.debounce) return outcome;

    outcome.sw.closed = sw.contact;
    outcome.sw.last_transition = now;
    outcome.event = SensorEvent{sw.location, sw.contact, now};
    return outcome;
}

std::string_view to_string(RelayAction action) {
    switch (action) {
        case RelayAction::Lock: return "LOCK";
        case RelayAction::Seize: return "SEIZE";
        case RelayAction::Cut: return "CUT";
    }
    return "?";
}

RelayBank apply_relay(RelayBank bank, RelayAction action) {
    switch (action) {
        case RelayAction::Lock: bank.gear_lock = true; break;
        case RelayAction::Seize: bank.engine_seize = true; break;
        case RelayAction::Cut: bank.supply_cut = true; break;
    }
    return bank;
}

std::string describe(const RelayBank& bank) {
    auto flag = [](bool on) { return on ? "on" : "off"; };
    return std::string("gear_lock=") + flag(bank.gear_lock) + " engine_seize=" + flag(bank.engine_seize) +
           " supply_cut=" + flag(bank.supply_cut);
}

GpsSource::GpsSource(std::vector<Waypoint> track) {
    for (const auto& w : track) add(w);
}

void GpsSource::add(const Waypoint& waypoint) {
    auto pos = std::upper_bound(track_.begin(), track_.end(), waypoint.at,
                                [](VirtualTime t, const Waypoint& w) { return t < w.at; });
    track_.insert(pos, waypoint);
}

Result<TrackSample, VehicleError> GpsSource::sample(VirtualTime at) const {
    if (track_.empty()) return make_error(VehicleError::EmptyTrack, "GPS track has no waypoints");

    auto next = std::upper_bound(track_.begin(), track_.end(), at,
                                 [](VirtualTime t, const Waypoint& w) { return t < w.at; });
    if (next == track_.begin()) {
        const auto& first = track_.front();
        return TrackSample{first.latitude, first.longitude, first.valid, 0.0, 0.0};
    }
    const auto& prev = *std::prev(next);
    if (next == track_.end()) return TrackSample{prev.latitude, prev.longitude, prev.valid, 0.0, 0.0};

    const double span = static_cast<double>((next->at - prev.at).millis());
    const double frac = static_cast<double>((at - prev.at).millis()) / span;
    TrackSample s;
    s.latitude = prev.latitude + (next->latitude - prev.latitude) * frac;
    s.longitude = prev.longitude + (next->longitude - prev.longitude) * frac;
    s.valid = prev.valid;

    // Flat-earth approximation over one segment, in nautical miles.
    const double mean_lat = (prev.latitude + next->latitude) / 2.0 * std::numbers::pi / 180.0;
    const double north_nm = (next->latitude - prev.latitude) * 60.0;
    const double east_nm = (next->longitude - prev.longitude) * 60.0 * std::cos(mean_lat);
    const double hours = span / 3'600'000.0;
    s.speed_knots = std::hypot(north_nm, east_nm) / hours;
    if (s.speed_knots > 0.0) {
        double course = std::atan2(east_nm, north_nm) * 180.0 / std::numbers::pi;
        s.course_deg = course < 0.0 ? course + 360.0 : course;
    }
    return s;
}

Result<std::vector<std::string>, VehicleError> GpsSource::emit(VirtualTime now) const {
    const auto second = VirtualTime::from_seconds(now.whole_seconds());
    auto s = sample(second);
    if (!s) return s.error();

    const auto c = to_civil(second);
    char time_buf[16];
    char date_buf[16];
    char speed_buf[32];
    char course_buf[32];
    std::snprintf(time_buf, sizeof time_buf, "%02u%02u%02u.00", c.hour, c.minute, c.second);
    std::snprintf(date_buf, sizeof date_buf, "%02u%02u%02d", c.day, c.month, c.year % 100);
    std::snprintf(speed_buf, sizeof speed_buf, "%.1f", s->speed_knots);
    std::snprintf(course_buf, sizeof course_buf, "%.1f", s->course_deg);

    std::string lat, lat_h, lon, lon_h;
    if (s->valid) {
        auto la = nmea::encode_coordinate(s->latitude, true);
        auto lo = nmea::encode_coordinate(s->longitude, false);
        lat = la.value;
        lat_h = std::string(1, la.hemisphere);
        lon = lo.value;
        lon_h = std::string(1, lo.hemisphere);
    }

    const auto rmc = nmea::RawSentence::make(
        "GPRMC", {time_buf, s->valid ? "A" : "V", lat, lat_h, lon, lon_h, s->valid ? speed_buf : "",
                  s->valid ? course_buf : "", date_buf, "", ""});
    const auto gga = nmea::RawSentence::make(
        "GPGGA", {time_buf, lat, lat_h, lon, lon_h, s->valid ? "1" : "0", s->valid ? "08" : "00",
                  s->valid ? "0.9" : "", s->valid ? "12.0" : "", "M", "0.0", "M", "", ""});
    return std::vector<std::string>{nmea::serialize(rmc), nmea::serialize(gga)};
}

}  // namespace carguard
