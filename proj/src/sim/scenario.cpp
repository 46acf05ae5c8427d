#include "carguard/sim/scenario.hpp"

#include <charconv>
#include <cmath>

#include "carguard/sms.hpp"

namespace carguard::sim {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
    return s;
}

/// Pops the next blank-delimited token from `rest`.
std::string_view next_token(std::string_view& rest) {
    rest = trim(rest);
    std::size_t end = 0;
    while (end < rest.size() && !is_blank(rest[end])) ++end;
    auto token = rest.substr(0, end);
    rest.remove_prefix(end);
    return token;
}

std::optional<double> parse_number(std::string_view s) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::optional<bool> parse_flag(std::string_view s) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    return std::nullopt;
}

Error<ScenarioError> syntax(std::size_t line, const std::string& reason) {
    return make_error(ScenarioError::Syntax, "line " + std::to_string(line) + ": " + reason);
}

Result<Action, ScenarioError> parse_action(std::string_view verb, std::string_view rest, std::size_t line) {
    if (verb == "arm" || verb == "disarm" || verb == "release_relays") {
        if (!trim(rest).empty()) return syntax(line, std::string(verb) + " takes no arguments");
        if (verb == "arm") return Action{action::Arm{}};
        if (verb == "disarm") return Action{action::Disarm{}};
        return Action{action::ReleaseRelays{}};
    }
    if (verb == "tilt") {
        const auto kind_text = next_token(rest);
        const auto deg_text = next_token(rest);
        auto kind = parse_intrusion_kind(kind_text);
        if (!kind) return syntax(line, "unknown sensor '" + std::string(kind_text) + "'");
        auto deg = parse_number(deg_text);
        if (!deg || *deg < 0.0 || *deg > 180.0) return syntax(line, "tilt must be a number in [0, 180]");
        if (!trim(rest).empty()) return syntax(line, "trailing text after tilt");
        return Action{action::Tilt{*kind, *deg}};
    }
    if (verb == "owner_sms") {
        const auto number = next_token(rest);
        if (!is_phone_number(number)) return syntax(line, "bad phone number '" + std::string(number) + "'");
        const auto body = trim(rest);
        if (!is_valid_body(body)) return syntax(line, "SMS body longer than 160 characters or has control bytes");
        return Action{action::OwnerSms{std::string(number), std::string(body)}};
    }
    if (verb == "gps_waypoint") {
        auto lat = parse_number(next_token(rest));
        auto lon = parse_number(next_token(rest));
        auto valid = parse_flag(next_token(rest));
        if (!lat || std::fabs(*lat) > 90.0) return syntax(line, "latitude must be in [-90, 90]");
        if (!lon || std::fabs(*lon) > 180.0) return syntax(line, "longitude must be in [-180, 180]");
        if (!valid) return syntax(line, "validity must be 1/0/true/false");
        if (!trim(rest).empty()) return syntax(line, "trailing text after gps_waypoint");
        return Action{action::GpsWaypoint{*lat, *lon, *valid}};
    }
    return syntax(line, "unknown action '" + std::string(verb) + "'");
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::string describe(const Action& a) {
    struct Visitor {
        std::string operator()(const action::Arm&) const { return "arm"; }
        std::string operator()(const action::Disarm&) const { return "disarm"; }
        std::string operator()(const action::ReleaseRelays&) const { return "release_relays"; }
        std::string operator()(const action::Tilt& t) const {
            return "tilt " + std::string(to_string(t.kind)) + " " + format_number(t.degrees);
        }
        std::string operator()(const action::OwnerSms& s) const { return "owner_sms " + s.from + " " + s.body; }
        std::string operator()(const action::GpsWaypoint& w) const {
            return "gps_waypoint " + format_number(w.latitude) + " " + format_number(w.longitude) + " " +
                   (w.valid ? "1" : "0");
        }
    };
    return std::visit(Visitor{}, a);
}

Result<std::vector<ScenarioEvent>, ScenarioError> parse_scenario(std::string_view text) {
    std::vector<ScenarioEvent> events;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        auto content = trim(line);
        if (content.empty() || content.front() == '#') continue;

        const auto at_text = next_token(content);
        auto at = VirtualTime::parse_seconds(at_text);
        if (!at) return syntax(line_no, "bad time '" + std::string(at_text) + "'");
        const auto verb = next_token(content);
        if (verb.empty()) return syntax(line_no, "missing action");
        auto parsed = parse_action(verb, content, line_no);
        if (!parsed) return parsed.error();

        if (!events.empty() && *at < events.back().at) {
            return make_error(ScenarioError::Unsorted, "line " + std::to_string(line_no) + ": time " +
                                                           at->to_string() + " precedes previous event at " +
                                                           events.back().at.to_string());
        }
        events.push_back(ScenarioEvent{*at, std::move(parsed).value()});
    }
    return events;
}

}  // namespace carguard::sim
