#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <variant>

#include "carguard/result.hpp"
#include "carguard/sim/scenario.hpp"
#include "carguard/sim/simulation.hpp"

/// Newline-delimited JSON bridge between an interactive simulation and any
/// number of socket clients (the operator console).
///
/// Server -> client, one object per line:
///     {"at":5.0,"channel":"SMS_OUT","detail":"from=... to=... body=\"...\""}
///     {"error":"..."}                      (only to the client that erred)
///
/// Client -> server:
///     {"cmd":"arm"}  {"cmd":"disarm"}  {"cmd":"release_relays"}
///     {"cmd":"tilt","kind":"DOOR","deg":45}
///     {"cmd":"owner_sms","from":"+923001234567","body":"LOCK"}
///     {"cmd":"pause"}  {"cmd":"resume"}  {"cmd":"speed","ratio":4}
///
/// A client that connects late first receives every record produced so far.
namespace carguard::sim {

struct PauseCommand {};
struct ResumeCommand {};
struct SpeedCommand {
    double ratio;
};

using BridgeCommand = std::variant<Action, PauseCommand, ResumeCommand, SpeedCommand>;

enum class BridgeError { BadJson, BadCommand, Io };

Result<BridgeCommand, BridgeError> parse_bridge_command(std::string_view line);

/// `{"error":"<message>"}`
std::string error_reply(std::string_view message);

using WallClock = std::chrono::steady_clock;

/// Runs a simulation against a wall clock: virtual time advances at `ratio`
/// virtual seconds per wall second unless paused. Commands take effect at
/// the virtual time current when they are submitted.
class PacedSession {
public:
    PacedSession(Simulation& sim, double ratio, WallClock::time_point start);

    /// Advances the simulation to the virtual time corresponding to `now`.
    void pump(WallClock::time_point now);
    void submit(const BridgeCommand& command, WallClock::time_point now);

    [[nodiscard]] VirtualTime virtual_now(WallClock::time_point now) const;
    /// Wall time at which the next queued event becomes due, if running.
    [[nodiscard]] std::optional<WallClock::time_point> next_due() const;

    [[nodiscard]] bool paused() const { return paused_; }
    [[nodiscard]] double ratio() const { return ratio_; }

private:
    void rebase(WallClock::time_point now);

    Simulation& sim_;
    double ratio_;
    bool paused_ = false;
    WallClock::time_point anchor_wall_;
    VirtualTime anchor_virtual_;
};

class BridgeServer {
public:
    struct Options {
        std::string bind_address = "127.0.0.1";
        std::uint16_t port = 7070;  // 0 picks an ephemeral port
        double speed = 1.0;
    };

    /// Binds the socket and starts the simulation and I/O threads.
    static Result<std::unique_ptr<BridgeServer>, BridgeError> start(std::unique_ptr<Simulation> sim, Options options);

    BridgeServer(const BridgeServer&) = delete;
    BridgeServer& operator=(const BridgeServer&) = delete;
    ~BridgeServer();

    [[nodiscard]] std::uint16_t port() const { return port_; }
    void stop();

private:
    BridgeServer(std::unique_ptr<Simulation> sim, Options options, int listen_fd, std::uint16_t port, int wake_read,
                 int wake_write);

    void simulation_loop();
    void io_loop();
    void publish(std::string line);

    std::unique_ptr<Simulation> sim_;
    Options options_;
    int listen_fd_;
    std::uint16_t port_;
    int wake_read_;
    int wake_write_;

    std::atomic<bool> stopping_{false};

    std::mutex command_mutex_;
    std::condition_variable command_cv_;
    std::deque<BridgeCommand> commands_;

    std::mutex outbound_mutex_;
    std::deque<std::string> outbound_;

    std::thread sim_thread_;
    std::thread io_thread_;
};

}  // namespace carguard::sim
