#include "carguard/sim/bridge.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <json.hpp>
#include <vector>

#include "carguard/sms.hpp"

namespace carguard::sim {

namespace {

using nlohmann::json;

Error<BridgeError> bad_command(std::string message) { return make_error(BridgeError::BadCommand, std::move(message)); }

std::string required_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return {};
    return it->get<std::string>();
}

bool send_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const auto n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

}  // namespace

Result<BridgeCommand, BridgeError> parse_bridge_command(std::string_view line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) return make_error(BridgeError::BadJson, "malformed JSON");
    if (!j.is_object()) return bad_command("command must be a JSON object");
    const auto cmd = required_string(j, "cmd");
    if (cmd.empty()) return bad_command("missing \"cmd\"");

    if (cmd == "arm") return BridgeCommand{Action{action::Arm{}}};
    if (cmd == "disarm") return BridgeCommand{Action{action::Disarm{}}};
    if (cmd == "release_relays") return BridgeCommand{Action{action::ReleaseRelays{}}};
    if (cmd == "pause") return BridgeCommand{PauseCommand{}};
    if (cmd == "resume") return BridgeCommand{ResumeCommand{}};
    if (cmd == "speed") {
        auto it = j.find("ratio");
        if (it == j.end() || !it->is_number()) return bad_command("speed needs a numeric \"ratio\"");
        const double ratio = it->get<double>();
        if (!(ratio > 0.0) || !std::isfinite(ratio)) return bad_command("ratio must be positive");
        return BridgeCommand{SpeedCommand{ratio}};
    }
    if (cmd == "tilt") {
        auto kind = parse_intrusion_kind(required_string(j, "kind"));
        if (!kind) return bad_command("tilt needs \"kind\" DOOR, BONNET or TRUNK");
        auto it = j.find("deg");
        if (it == j.end() || !it->is_number()) return bad_command("tilt needs a numeric \"deg\"");
        const double deg = it->get<double>();
        if (!(deg >= 0.0 && deg <= 180.0)) return bad_command("deg must be in [0, 180]");
        return BridgeCommand{Action{action::Tilt{*kind, deg}}};
    }
    if (cmd == "owner_sms") {
        const auto from = required_string(j, "from");
        if (!is_phone_number(from)) return bad_command("owner_sms needs a phone number in \"from\"");
        auto it = j.find("body");
        if (it == j.end() || !it->is_string()) return bad_command("owner_sms needs a string \"body\"");
        auto body = it->get<std::string>();
        if (!is_valid_body(body)) return bad_command("body must be at most 160 characters without CR or Ctrl-Z");
        return BridgeCommand{Action{action::OwnerSms{from, std::move(body)}}};
    }
    return bad_command("unknown cmd \"" + cmd + "\"");
}

std::string error_reply(std::string_view message) {
    json j = {{"error", std::string(message)}};
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

// ---------------------------------------------------------------------------

PacedSession::PacedSession(Simulation& sim, double ratio, WallClock::time_point start)
    : sim_(sim), ratio_(ratio), anchor_wall_(start), anchor_virtual_(sim.now()) {}

VirtualTime PacedSession::virtual_now(WallClock::time_point now) const {
    if (paused_ || now <= anchor_wall_) return anchor_virtual_;
    const double wall_ms = std::chrono::duration<double, std::milli>(now - anchor_wall_).count();
    return anchor_virtual_ + VirtualTime::from_millis(static_cast<std::int64_t>(std::floor(wall_ms * ratio_)));
}

std::optional<WallClock::time_point> PacedSession::next_due() const {
    const auto next = sim_.next_event_time();
    if (paused_ || !next) return std::nullopt;
    const double virtual_ms = static_cast<double>((*next - anchor_virtual_).millis());
    const auto wall = std::chrono::duration<double, std::milli>(std::max(0.0, virtual_ms / ratio_));
    return anchor_wall_ + std::chrono::duration_cast<WallClock::duration>(wall);
}

void PacedSession::rebase(WallClock::time_point now) {
    anchor_virtual_ = virtual_now(now);
    anchor_wall_ = now;
}

void PacedSession::pump(WallClock::time_point now) {
    const auto target = virtual_now(now);
    if (target >= sim_.now()) sim_.advance_to(target);
}

void PacedSession::submit(const BridgeCommand& command, WallClock::time_point now) {
    pump(now);
    if (const auto* a = std::get_if<Action>(&command)) {
        sim_.inject(*a);
    } else if (std::holds_alternative<PauseCommand>(command)) {
        rebase(now);
        paused_ = true;
    } else if (std::holds_alternative<ResumeCommand>(command)) {
        paused_ = false;
        anchor_wall_ = now;
    } else if (const auto* s = std::get_if<SpeedCommand>(&command)) {
        rebase(now);
        ratio_ = s->ratio;
    }
}

// ---------------------------------------------------------------------------

Result<std::unique_ptr<BridgeServer>, BridgeError> BridgeServer::start(std::unique_ptr<Simulation> sim,
                                                                       Options options) {
    if (!(options.speed > 0.0)) return make_error(BridgeError::BadCommand, "speed must be positive");

    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return make_error(BridgeError::Io, std::string("socket: ") + std::strerror(errno));
    int yes = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(options.port);
    if (::inet_pton(AF_INET, options.bind_address.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        return make_error(BridgeError::Io, "bad bind address " + options.bind_address);
    }
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd, 8) != 0) {
        const std::string reason = std::strerror(errno);
        ::close(fd);
        return make_error(BridgeError::Io, "bind/listen: " + reason);
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);

    int pipe_fds[2];
    if (::pipe(pipe_fds) != 0) {
        ::close(fd);
        return make_error(BridgeError::Io, std::string("pipe: ") + std::strerror(errno));
    }
    ::fcntl(pipe_fds[0], F_SETFL, O_NONBLOCK);
    ::fcntl(pipe_fds[1], F_SETFL, O_NONBLOCK);

    std::unique_ptr<BridgeServer> server(
        new BridgeServer(std::move(sim), std::move(options), fd, ntohs(addr.sin_port), pipe_fds[0], pipe_fds[1]));
    server->sim_->set_listener(
        [s = server.get()](const TranscriptRecord& record) { s->publish(record_to_json(record)); });
    server->io_thread_ = std::thread([s = server.get()] { s->io_loop(); });
    server->sim_thread_ = std::thread([s = server.get()] { s->simulation_loop(); });
    return server;
}

BridgeServer::BridgeServer(std::unique_ptr<Simulation> sim, Options options, int listen_fd, std::uint16_t port,
                           int wake_read, int wake_write)
    : sim_(std::move(sim)),
      options_(std::move(options)),
      listen_fd_(listen_fd),
      port_(port),
      wake_read_(wake_read),
      wake_write_(wake_write) {}

BridgeServer::~BridgeServer() { stop(); }

void BridgeServer::stop() {
    if (stopping_.exchange(true)) return;
    command_cv_.notify_all();
    const char byte = 0;
    [[maybe_unused]] auto ignored = ::write(wake_write_, &byte, 1);
    if (sim_thread_.joinable()) sim_thread_.join();
    if (io_thread_.joinable()) io_thread_.join();
    ::close(listen_fd_);
    ::close(wake_read_);
    ::close(wake_write_);
}

void BridgeServer::publish(std::string line) {
    {
        std::lock_guard lock(outbound_mutex_);
        outbound_.push_back(std::move(line));
    }
    const char byte = 1;
    [[maybe_unused]] auto ignored = ::write(wake_write_, &byte, 1);
}

void BridgeServer::simulation_loop() {
    PacedSession session(*sim_, options_.speed, WallClock::now());
    constexpr auto kMaxSleep = std::chrono::milliseconds(100);
    while (!stopping_) {
        std::deque<BridgeCommand> batch;
        {
            std::unique_lock lock(command_mutex_);
            auto wake = WallClock::now() + kMaxSleep;
            if (auto due = session.next_due(); due && *due < wake) wake = *due;
            command_cv_.wait_until(lock, wake, [&] { return stopping_ || !commands_.empty(); });
            batch.swap(commands_);
        }
        const auto now = WallClock::now();
        session.pump(now);
        for (const auto& command : batch) session.submit(command, now);
    }
}

void BridgeServer::io_loop() {
    struct Client {
        int fd;
        std::string buffer;
        bool dead = false;
    };
    std::vector<Client> clients;
    std::vector<std::string> history;

    // Dead clients are closed immediately but only erased at the end of an
    // iteration so that `fds[i + 2]` keeps matching `clients[i]`.
    auto drop = [&](std::size_t i) {
        if (clients[i].dead) return;
        ::close(clients[i].fd);
        clients[i].dead = true;
    };

    while (!stopping_) {
        std::vector<pollfd> fds;
        fds.push_back({listen_fd_, POLLIN, 0});
        fds.push_back({wake_read_, POLLIN, 0});
        for (const auto& c : clients) fds.push_back({c.fd, POLLIN, 0});
        if (::poll(fds.data(), fds.size(), 100) < 0 && errno != EINTR) break;

        if (fds[1].revents & POLLIN) {
            char sink[256];
            while (::read(wake_read_, sink, sizeof sink) > 0) {
            }
        }
        std::deque<std::string> lines;
        {
            std::lock_guard lock(outbound_mutex_);
            lines.swap(outbound_);
        }
        for (auto& line : lines) {
            line += '\n';
            for (std::size_t i = 0; i < clients.size(); ++i) {
                if (!clients[i].dead && !send_all(clients[i].fd, line)) drop(i);
            }
            history.push_back(std::move(line));
        }

        for (std::size_t i = 0; i < clients.size(); ++i) {
            if (clients[i].dead || !(fds[i + 2].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            char buf[4096];
            const auto n = ::recv(clients[i].fd, buf, sizeof buf, 0);
            if (n <= 0) {
                drop(i);
                continue;
            }
            clients[i].buffer.append(buf, static_cast<std::size_t>(n));
            std::size_t nl;
            bool alive = true;
            while (alive && (nl = clients[i].buffer.find('\n')) != std::string::npos) {
                std::string line = clients[i].buffer.substr(0, nl);
                clients[i].buffer.erase(0, nl + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                auto command = parse_bridge_command(line);
                if (!command) {
                    alive = send_all(clients[i].fd, error_reply(command.error().message) + "\n");
                    continue;
                }
                {
                    std::lock_guard lock(command_mutex_);
                    commands_.push_back(std::move(command).value());
                }
                command_cv_.notify_one();
            }
            if (!alive) drop(i);
        }

        if (fds[0].revents & POLLIN) {
            const int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd >= 0) {
                bool ok = true;
                for (const auto& line : history) {
                    if (!(ok = send_all(fd, line))) break;
                }
                if (ok) {
                    clients.push_back(Client{fd, {}});
                } else {
                    ::close(fd);
                }
            }
        }
        std::erase_if(clients, [](const Client& c) { return c.dead; });
    }
    for (auto& c : clients) ::close(c.fd);
}

}  // namespace carguard::sim
