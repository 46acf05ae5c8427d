#include "carguard/controller.hpp"

#include <algorithm>
#include <cctype>

namespace carguard::control {

namespace {

std::string kinds_text(const std::set<IntrusionKind>& kinds) {
    if (kinds.empty()) return "NONE";
    std::string out;
    for (auto kind : kinds) {
        if (!out.empty()) out += ',';
        out += to_string(kind);
    }
    return out;
}

std::string location_text(const ControllerState& state) {
    return nmea::render_fix_text(state.last_fix.value_or(nmea::GpsFix{}));
}

bool whitelisted(const ControllerState& state, std::string_view number) {
    return std::find(state.whitelist.begin(), state.whitelist.end(), number) != state.whitelist.end();
}

void fan_out(const ControllerState& state, const std::string& body, std::vector<OutboundSms>& out) {
    for (const auto& number : state.whitelist) out.push_back(OutboundSms{number, body});
}

std::optional<RelayAction> relay_for(Verb verb) {
    switch (verb) {
        case Verb::Lock: return RelayAction::Lock;
        case Verb::Seize: return RelayAction::Seize;
        case Verb::Cut: return RelayAction::Cut;
        default: return std::nullopt;
    }
}

}  // namespace

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::Disarmed: return "DISARMED";
        case Phase::Armed: return "ARMED";
        case Phase::Alerting: return "ALERTING";
        case Phase::PostAction: return "POST_ACTION";
    }
    return "?";
}

std::string_view to_string(Verb verb) {
    switch (verb) {
        case Verb::Lock: return "LOCK";
        case Verb::Seize: return "SEIZE";
        case Verb::Cut: return "CUT";
        case Verb::Disarm: return "DISARM";
        case Verb::Status: return "STATUS";
    }
    return "?";
}

std::optional<Verb> parse_command(std::string_view body) {
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    auto begin = std::find_if_not(body.begin(), body.end(), is_space);
    auto end = std::find_if(begin, body.end(), is_space);
    std::string token(begin, end);
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto verb : {Verb::Lock, Verb::Seize, Verb::Cut, Verb::Disarm, Verb::Status}) {
        if (token == to_string(verb)) return verb;
    }
    return std::nullopt;
}

Result<ControllerState, ConfigError> make_controller(std::vector<std::string> whitelist) {
    if (whitelist.empty()) return make_error(ConfigError::EmptyWhitelist, "whitelist is empty");
    if (whitelist.size() > kMaxWhitelist) {
        return make_error(ConfigError::TooManyNumbers, "whitelist holds at most 5 numbers");
    }
    for (std::size_t i = 0; i < whitelist.size(); ++i) {
        if (!is_phone_number(whitelist[i])) return make_error(ConfigError::BadNumber, "bad number " + whitelist[i]);
        if (std::find(whitelist.begin(), whitelist.begin() + static_cast<long>(i), whitelist[i]) !=
            whitelist.begin() + static_cast<long>(i)) {
            return make_error(ConfigError::DuplicateNumber, "duplicate number " + whitelist[i]);
        }
    }
    ControllerState state;
    state.whitelist = std::move(whitelist);
    return state;
}

AlertMessage compose_alert(const ControllerState& state) {
    int id = 0;
    for (auto kind : state.intrusions) id |= 1 << static_cast<int>(kind);
    return AlertMessage{id, "ALERT " + kinds_text(state.intrusions) + " | " + location_text(state)};
}

AlertMessage compose_update(const ControllerState& state) {
    return AlertMessage{0, "UPDATE | " + location_text(state)};
}

std::string compose_status(const ControllerState& state) {
    return "STATUS " + std::string(to_string(state.phase)) + " " + kinds_text(state.intrusions) + " " +
           describe(state.relays) + " | " + location_text(state);
}

Result<ControllerState, ArmError> arm(ControllerState state) {
    if (state.phase != Phase::Disarmed) return make_error(ArmError::AlreadyArmed, "controller is already armed");
    if (state.whitelist.empty()) return make_error(ArmError::EmptyWhitelist, "cannot arm with an empty whitelist");
    state.phase = Phase::Armed;
    state.intrusions.clear();
    state.next_sms_deadline.reset();
    return state;
}

ControllerState disarm(ControllerState state) {
    state.phase = Phase::Disarmed;
    state.intrusions.clear();
    state.next_sms_deadline.reset();
    return state;
}

ControllerState release_relays(ControllerState state) {
    state.relays = RelayBank{};
    return state;
}

Step on_sensor(ControllerState state, IntrusionKind kind, VirtualTime now) {
    Step step{std::move(state), {}, {}};
    auto& s = step.state;
    switch (s.phase) {
        case Phase::Disarmed:
            break;
        case Phase::Armed:
            s.phase = Phase::Alerting;
            s.intrusions.insert(kind);
            fan_out(s, compose_alert(s).text, step.sms);
            s.next_sms_deadline = now + kRepeatInterval;
            break;
        case Phase::Alerting:
        case Phase::PostAction:
            s.intrusions.insert(kind);
            break;
    }
    return step;
}

Step on_owner_sms(ControllerState state, const SmsMessage& message, VirtualTime /*now*/) {
    Step step{std::move(state), {}, {}};
    auto& s = step.state;
    if (s.phase == Phase::Disarmed || !whitelisted(s, message.sender)) return step;

    const auto verb = parse_command(message.body);
    if (!verb) {
        step.sms.push_back(OutboundSms{message.sender, "ERR UNKNOWN CMD"});
        return step;
    }
    if (auto action = relay_for(*verb)) {
        s.relays = apply_relay(s.relays, *action);
        step.relays.push_back(RelayDirective{*action, message.sender});
        if (s.phase == Phase::Alerting) s.phase = Phase::PostAction;
        step.sms.push_back(OutboundSms{message.sender, "ACK " + std::string(to_string(*verb))});
        return step;
    }
    if (*verb == Verb::Disarm) {
        s = disarm(std::move(s));
        step.sms.push_back(OutboundSms{message.sender, "ACK DISARM"});
        return step;
    }
    step.sms.push_back(OutboundSms{message.sender, compose_status(s)});
    return step;
}

Step tick(ControllerState state, VirtualTime now) {
    Step step{std::move(state), {}, {}};
    auto& s = step.state;
    if (!s.next_sms_deadline || now < *s.next_sms_deadline) return step;
    const auto body = s.phase == Phase::PostAction ? compose_update(s).text : compose_alert(s).text;
    fan_out(s, body, step.sms);
    s.next_sms_deadline = *s.next_sms_deadline + kRepeatInterval;
    return step;
}

ControllerState on_gps(ControllerState state, const nmea::GpsFix& fix) {
    if (fix.valid) state.last_fix = fix;
    return state;
}

}  // namespace carguard::control
