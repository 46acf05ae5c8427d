#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "carguard/controller.hpp"
#include "carguard/modem_driver.hpp"
#include "carguard/modem_emulator.hpp"
#include "carguard/result.hpp"
#include "carguard/sim/event_queue.hpp"
#include "carguard/sim/scenario.hpp"
#include "carguard/sim/transcript.hpp"
#include "carguard/sim/transport.hpp"
#include "carguard/vehicle.hpp"

namespace carguard::sim {

struct SimConfig {
    std::vector<std::string> whitelist{"+923001234567"};
    std::string unit_number = "+923330000001";
    TransportConfig transport;
    /// Batch runs stop here when set; otherwise they run to quiescence.
    std::optional<VirtualTime> horizon;
    /// Cap for runs without an explicit horizon (e.g. an alert nobody answers).
    VirtualTime quiescence_limit = VirtualTime::from_seconds(86400);
    /// Vehicle position at t=0; scenario waypoints extend the track.
    Waypoint home{VirtualTime{}, 24.8607, 67.0011, true};
    SwitchConfig switches;
};

enum class SimError { BadConfig };

/// The whole unit plus its environment: tilt switches, GPS receiver, SIM300
/// emulator on a serial link, the controller, the SMS network and the owner
/// phones. Every observable effect becomes a TranscriptRecord.
///
/// Batch mode: construct with a scenario and call run(). Interactive mode:
/// construct without one and alternate advance_to() with inject().
class Simulation {
public:
    static Result<std::unique_ptr<Simulation>, SimError> create(SimConfig config,
                                                                std::vector<ScenarioEvent> scenario = {});

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Processes everything to quiescence or the horizon.
    Transcript run();

    /// Processes all events with timestamp <= `t`, then sets the clock to `t`.
    void advance_to(VirtualTime t);

    /// Applies an action at the current virtual time.
    void inject(const Action& action);

    /// Called synchronously for every record as it is produced.
    void set_listener(std::function<void(const TranscriptRecord&)> listener) { listener_ = std::move(listener); }

    [[nodiscard]] VirtualTime now() const { return now_; }
    [[nodiscard]] std::optional<VirtualTime> next_event_time() const { return queue_.next_time(); }
    [[nodiscard]] const std::vector<TranscriptRecord>& records() const { return records_; }
    [[nodiscard]] const control::ControllerState& controller() const { return controller_; }
    [[nodiscard]] const at::ModemEmulator& modem() const { return modem_; }
    [[nodiscard]] const std::map<std::string, std::vector<SmsMessage>>& phone_inboxes() const { return inboxes_; }
    [[nodiscard]] const SimConfig& config() const { return config_; }

    /// "# carguard transcript seed=... latency=... loss=... unit=... whitelist=..."
    [[nodiscard]] std::string header() const;

private:
    struct GpsTick {};
    struct ControllerTick {};
    struct SmsArrival {
        SmsMessage message;
    };
    struct Scripted {
        Action action;
    };
    using Event = std::variant<Scripted, GpsTick, ControllerTick, SmsArrival>;

    Simulation(SimConfig config, control::ControllerState controller, std::vector<ScenarioEvent> scenario);

    void start();
    void process(EventQueue<Event>::Entry entry);
    void handle(const Action& action);
    void handle_gps();
    void handle_arrival(const SmsMessage& message);
    void apply(control::Step step);
    void send_from_phone(const std::string& from, const std::string& body);
    void route(const SmsMessage& message);
    void record(Channel channel, std::string detail);
    void record_state_if_changed();
    [[nodiscard]] std::string state_summary() const;
    [[nodiscard]] bool quiescent() const { return pending_one_shot_ == 0; }

    SimConfig config_;
    control::ControllerState controller_;
    std::array<MercurySwitch, 3> switches_;
    GpsSource gps_;
    at::ModemEmulator modem_;
    at::EmulatorLink link_;
    at::ModemDriver driver_;
    SmsTransport transport_;
    EventQueue<Event> queue_;
    std::size_t pending_one_shot_ = 0;
    std::optional<VirtualTime> scheduled_tick_;
    std::map<std::string, std::vector<SmsMessage>> inboxes_;
    VirtualTime now_;
    bool started_ = false;
    std::string last_state_;
    std::vector<TranscriptRecord> records_;
    std::function<void(const TranscriptRecord&)> listener_;
};

}  // namespace carguard::sim
