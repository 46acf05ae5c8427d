#include "carguard/sim/simulation.hpp"

#include <charconv>
#include <cmath>

#include "carguard/nmea.hpp"

namespace carguard::sim {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string sms_detail(const SmsMessage& m) {
    return "from=" + m.sender + " to=" + m.recipient + " body=" + quote(m.body);
}

std::size_t slot_of(IntrusionKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

Result<std::unique_ptr<Simulation>, SimError> Simulation::create(SimConfig config,
                                                                 std::vector<ScenarioEvent> scenario) {
    auto controller = control::make_controller(config.whitelist);
    if (!controller) return make_error(SimError::BadConfig, controller.error().message);
    if (!is_phone_number(config.unit_number)) {
        return make_error(SimError::BadConfig, "bad unit number " + config.unit_number);
    }
    for (const auto& number : config.whitelist) {
        if (number == config.unit_number) return make_error(SimError::BadConfig, "unit number is whitelisted");
    }
    if (config.transport.latency < VirtualTime{}) return make_error(SimError::BadConfig, "negative latency");
    if (!(config.transport.loss_prob >= 0.0 && config.transport.loss_prob <= 1.0)) {
        return make_error(SimError::BadConfig, "loss probability must be in [0, 1]");
    }
    if (std::fabs(config.home.latitude) > 90.0 || std::fabs(config.home.longitude) > 180.0) {
        return make_error(SimError::BadConfig, "home position out of range");
    }
    for (std::size_t i = 1; i < scenario.size(); ++i) {
        if (scenario[i].at < scenario[i - 1].at) return make_error(SimError::BadConfig, "scenario is not sorted");
    }
    return std::unique_ptr<Simulation>(
        new Simulation(std::move(config), std::move(controller).value(), std::move(scenario)));
}

Simulation::Simulation(SimConfig config, control::ControllerState controller, std::vector<ScenarioEvent> scenario)
    : config_(std::move(config)),
      controller_(std::move(controller)),
      modem_(config_.unit_number),
      link_(modem_),
      driver_(link_, config_.unit_number),
      transport_(config_.transport) {
    for (auto kind : kAllIntrusionKinds) {
        switches_[slot_of(kind)].location = kind;
        switches_[slot_of(kind)].config = config_.switches;
    }
    config_.home.at = VirtualTime{};
    gps_.add(config_.home);

    for (auto& event : scenario) {
        // Waypoints are known up front so the receiver can interpolate toward them.
        if (const auto* w = std::get_if<action::GpsWaypoint>(&event.action)) {
            gps_.add(Waypoint{event.at, w->latitude, w->longitude, w->valid});
            continue;
        }
        queue_.push(event.at, Scripted{std::move(event.action)});
        ++pending_one_shot_;
    }
    queue_.push(VirtualTime{}, GpsTick{});

    link_.set_tap([this](at::EmulatorLink::Direction dir, std::string_view bytes) {
        record(Channel::Serial,
               std::string(dir == at::EmulatorLink::Direction::ToModem ? "at-tx " : "at-rx ") + quote(bytes));
    });
}

std::string Simulation::header() const {
    std::string whitelist;
    for (const auto& n : config_.whitelist) {
        if (!whitelist.empty()) whitelist += ',';
        whitelist += n;
    }
    return "# carguard transcript seed=" + std::to_string(config_.transport.seed) +
           " latency=" + config_.transport.latency.to_string() + " loss=" + format_double(config_.transport.loss_prob) +
           " horizon=" + (config_.horizon ? config_.horizon->to_string() : std::string("none")) +
           " unit=" + config_.unit_number + " whitelist=" + whitelist;
}

void Simulation::start() {
    if (started_) return;
    started_ = true;
    last_state_ = state_summary();
    record(Channel::State, last_state_);
    if (auto init = driver_.initialize(); !init) {
        record(Channel::Serial, "driver-error " + std::string(at::to_string(init.error().code)) + ": " +
                                    init.error().message);
    }
}

Transcript Simulation::run() {
    start();
    const VirtualTime limit = config_.horizon.value_or(config_.quiescence_limit);
    while (!queue_.empty()) {
        if (!config_.horizon && quiescent()) break;
        if (*queue_.next_time() > limit) break;
        process(queue_.pop());
    }
    Transcript transcript;
    transcript.header = header();
    transcript.records = records_;
    transcript.pending_at_horizon = pending_one_shot_;
    transcript.horizon_exceeded = pending_one_shot_ > 0;
    return transcript;
}

void Simulation::advance_to(VirtualTime t) {
    start();
    while (!queue_.empty() && *queue_.next_time() <= t) process(queue_.pop());
    if (t > now_) now_ = t;
}

void Simulation::inject(const Action& action) {
    start();
    handle(action);
}

void Simulation::process(EventQueue<Event>::Entry entry) {
    now_ = entry.at;
    if (!std::holds_alternative<GpsTick>(entry.event)) --pending_one_shot_;

    if (auto* scripted = std::get_if<Scripted>(&entry.event)) {
        handle(scripted->action);
    } else if (std::holds_alternative<GpsTick>(entry.event)) {
        handle_gps();
    } else if (std::holds_alternative<ControllerTick>(entry.event)) {
        if (scheduled_tick_ == now_) scheduled_tick_.reset();
        apply(control::tick(controller_, now_));
    } else if (auto* arrival = std::get_if<SmsArrival>(&entry.event)) {
        handle_arrival(arrival->message);
    }
}

void Simulation::handle(const Action& a) {
    if (std::holds_alternative<action::Arm>(a)) {
        auto armed = control::arm(controller_);
        if (!armed) {
            record(Channel::Serial, "console arm rejected: " + armed.error().message);
            return;
        }
        controller_ = std::move(armed).value();
        record_state_if_changed();
    } else if (std::holds_alternative<action::Disarm>(a)) {
        controller_ = control::disarm(controller_);
        record_state_if_changed();
    } else if (const auto* tilt = std::get_if<action::Tilt>(&a)) {
        auto& sw = switches_[slot_of(tilt->kind)];
        auto moved = set_tilt(sw, tilt->degrees, now_);
        if (!moved) {
            record(Channel::Serial, "sensor error: " + moved.error().message);
            return;
        }
        sw = moved->sw;
        if (const auto& event = moved->event) {
            record(Channel::Serial, "sensor " + std::string(to_string(event->kind)) +
                                        (event->closed ? " closed" : " open") + " tilt=" + format_double(sw.tilt_deg));
            if (event->closed) apply(control::on_sensor(controller_, event->kind, now_));
        }
    } else if (const auto* sms = std::get_if<action::OwnerSms>(&a)) {
        send_from_phone(sms->from, sms->body);
    } else if (const auto* w = std::get_if<action::GpsWaypoint>(&a)) {
        gps_.add(Waypoint{now_, w->latitude, w->longitude, w->valid});
    } else if (std::holds_alternative<action::ReleaseRelays>(a)) {
        controller_ = control::release_relays(controller_);
        record(Channel::Relay, "RELEASE by=local " + describe(controller_.relays));
    }
}

void Simulation::handle_gps() {
    queue_.push(now_ + VirtualTime::from_seconds(1), GpsTick{});
    auto lines = gps_.emit(now_);
    if (!lines) {
        record(Channel::Serial, "gps error: " + lines.error().message);
        return;
    }
    for (const auto& line : *lines) {
        record(Channel::Serial, "gps " + line.substr(0, line.size() - 2));
        auto decoded = nmea::decode_line(line);
        if (!decoded) {
            record(Channel::Serial, "gps decode error: " + std::string(nmea::to_string(decoded.error().code)));
            continue;
        }
        if (decoded->has_value()) controller_ = control::on_gps(controller_, **decoded);
    }
}

void Simulation::handle_arrival(const SmsMessage& message) {
    record(Channel::SmsIn, sms_detail(message));
    if (message.recipient != config_.unit_number) {
        inboxes_[message.recipient].push_back(message);
        return;
    }

    modem_.set_time(now_);
    auto delivered = modem_.deliver(message);
    if (!delivered) {
        record(Channel::Serial, "modem overflow +CMS ERROR: " + delivered.error().message);
        return;
    }
    link_.push_unsolicited(*delivered);

    auto inbox = driver_.poll_inbox();
    if (!inbox) {
        record(Channel::Serial, "driver-error " + std::string(at::to_string(inbox.error().code)) + ": " +
                                    inbox.error().message);
        return;
    }
    for (const auto& received : *inbox) apply(control::on_owner_sms(controller_, received, now_));
}

void Simulation::apply(control::Step step) {
    controller_ = std::move(step.state);
    for (const auto& directive : step.relays) {
        record(Channel::Relay, std::string(to_string(directive.action)) + " by=" + directive.authorized_by + " " +
                                   describe(controller_.relays));
    }
    for (const auto& sms : step.sms) {
        modem_.set_time(now_);
        auto sent = driver_.send_sms(sms.recipient, sms.body);
        if (!sent) {
            record(Channel::Serial, "driver-error " + std::string(at::to_string(sent.error().code)) + ": " +
                                        sent.error().message);
        }
        for (const auto& out : modem_.take_outbox()) route(out);
    }
    record_state_if_changed();

    const auto& deadline = controller_.next_sms_deadline;
    if (deadline && scheduled_tick_ != deadline) {
        queue_.push(*deadline, ControllerTick{});
        ++pending_one_shot_;
        scheduled_tick_ = deadline;
    }
}

void Simulation::send_from_phone(const std::string& from, const std::string& body) {
    route(SmsMessage{from, config_.unit_number, body, now_});
}

void Simulation::route(const SmsMessage& message) {
    record(Channel::SmsOut, sms_detail(message));
    if (auto delivery = transport_.route(now_)) {
        queue_.push(*delivery, SmsArrival{message});
        ++pending_one_shot_;
    }
}

void Simulation::record(Channel channel, std::string detail) {
    records_.push_back(TranscriptRecord{now_, channel, std::move(detail)});
    if (listener_) listener_(records_.back());
}

std::string Simulation::state_summary() const {
    std::string kinds;
    for (auto kind : controller_.intrusions) {
        if (!kinds.empty()) kinds += ',';
        kinds += to_string(kind);
    }
    return "phase=" + std::string(control::to_string(controller_.phase)) +
           " intrusions=" + (kinds.empty() ? std::string("NONE") : kinds) + " deadline=" +
           (controller_.next_sms_deadline ? controller_.next_sms_deadline->to_string() : std::string("none"));
}

void Simulation::record_state_if_changed() {
    auto summary = state_summary();
    if (summary == last_state_) return;
    last_state_ = std::move(summary);
    record(Channel::State, last_state_);
}

}  // namespace carguard::sim
