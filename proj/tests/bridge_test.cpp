#include "carguard/sim/bridge.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include <json.hpp>

namespace carguard::sim {
namespace {

using namespace std::chrono_literals;
using nlohmann::json;

TEST(BridgeCommand, ParsesEveryCommand) {
    EXPECT_EQ(std::get<Action>(*parse_bridge_command(R"({"cmd":"arm"})")), Action{action::Arm{}});
    EXPECT_EQ(std::get<Action>(*parse_bridge_command(R"({"cmd":"disarm"})")), Action{action::Disarm{}});
    EXPECT_EQ(std::get<Action>(*parse_bridge_command(R"({"cmd":"release_relays"})")),
              Action{action::ReleaseRelays{}});
    EXPECT_EQ(std::get<Action>(*parse_bridge_command(R"({"cmd":"tilt","kind":"door","deg":45})")),
              Action{(action::Tilt{IntrusionKind::Door, 45.0})});
    EXPECT_EQ(std::get<Action>(*parse_bridge_command(R"({"cmd":"owner_sms","from":"+923001234567","body":"LOCK"})")),
              Action{(action::OwnerSms{"+923001234567", "LOCK"})});
    EXPECT_TRUE(std::holds_alternative<PauseCommand>(*parse_bridge_command(R"({"cmd":"pause"})")));
    EXPECT_TRUE(std::holds_alternative<ResumeCommand>(*parse_bridge_command(R"({"cmd":"resume"})")));
    EXPECT_DOUBLE_EQ(std::get<SpeedCommand>(*parse_bridge_command(R"({"cmd":"speed","ratio":4})")).ratio, 4.0);
}

TEST(BridgeCommand, RejectsBadInput) {
    EXPECT_EQ(parse_bridge_command("{not json").error().code, BridgeError::BadJson);
    EXPECT_EQ(parse_bridge_command("").error().code, BridgeError::BadJson);
    for (const char* line : {R"([1,2])", R"({"cmd":"fly"})", R"({"nocmd":1})", R"({"cmd":"tilt","kind":"DOOR"})",
                             R"({"cmd":"tilt","kind":"ROOF","deg":45})", R"({"cmd":"tilt","kind":"DOOR","deg":200})",
                             R"({"cmd":"owner_sms","from":"x","body":"LOCK"})",
                             R"({"cmd":"owner_sms","from":"+923001234567"})", R"({"cmd":"speed","ratio":0})",
                             R"({"cmd":"speed","ratio":"fast"})"}) {
        auto r = parse_bridge_command(line);
        ASSERT_FALSE(r) << line;
        EXPECT_EQ(r.error().code, BridgeError::BadCommand) << line;
    }
}

TEST(BridgeCommand, ErrorReplyIsJson) {
    auto j = json::parse(error_reply("bad \"thing\""));
    EXPECT_EQ(j["error"], "bad \"thing\"");
}

// ------------------------------------------------------------- pacing

TEST(PacedSession, MapsWallTimeThroughRatioPauseAndSpeed) {
    auto sim = Simulation::create(SimConfig{}).value();
    const auto t0 = WallClock::time_point{} + 1000s;
    PacedSession session(*sim, 2.0, t0);

    session.pump(t0 + 1s);
    EXPECT_EQ(sim->now(), VirtualTime::from_seconds(2));

    session.submit(PauseCommand{}, t0 + 1s);
    EXPECT_TRUE(session.paused());
    EXPECT_FALSE(session.next_due());
    session.pump(t0 + 10s);
    EXPECT_EQ(sim->now(), VirtualTime::from_seconds(2));

    session.submit(ResumeCommand{}, t0 + 10s);
    session.pump(t0 + 11s);
    EXPECT_EQ(sim->now(), VirtualTime::from_seconds(4));

    session.submit(SpeedCommand{4.0}, t0 + 11s);
    session.pump(t0 + 12s);
    EXPECT_EQ(sim->now(), VirtualTime::from_seconds(8));

    // Next GPS tick is at virtual 9 s: a quarter wall second away at 4x.
    ASSERT_TRUE(session.next_due());
    EXPECT_EQ(*session.next_due(), t0 + 12s + 250ms);
}

TEST(PacedSession, CommandsApplyAtCurrentVirtualTime) {
    auto sim = Simulation::create(SimConfig{}).value();
    const auto t0 = WallClock::time_point{};
    PacedSession session(*sim, 1.0, t0);
    session.submit(Action{action::Arm{}}, t0 + 3s);
    session.submit(Action{action::Tilt{IntrusionKind::Door, 45}}, t0 + 5500ms);
    bool found = false;
    for (const auto& r : sim->records()) {
        if (r.channel == Channel::SmsOut) {
            EXPECT_EQ(r.at, VirtualTime::from_millis(5500));
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

// ------------------------------------------------------------- sockets

class Client {
public:
    explicit Client(std::uint16_t port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
        connected_ = ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0;
    }
    ~Client() { ::close(fd_); }
    Client(const Client&) = delete;
    Client& operator=(const Client&) = delete;

    [[nodiscard]] bool connected() const { return connected_; }

    void send(const std::string& line) {
        const std::string data = line + "\n";
        ASSERT_EQ(::send(fd_, data.data(), data.size(), MSG_NOSIGNAL), static_cast<ssize_t>(data.size()));
    }

    std::optional<std::string> read_line(std::chrono::milliseconds timeout = 5000ms) {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        while (true) {
            if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
                auto line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline -
                                                                                    std::chrono::steady_clock::now());
            if (left.count() <= 0) return std::nullopt;
            pollfd p{fd_, POLLIN, 0};
            if (::poll(&p, 1, static_cast<int>(left.count())) <= 0) return std::nullopt;
            char buf[4096];
            const auto n = ::recv(fd_, buf, sizeof buf, 0);
            if (n <= 0) return std::nullopt;
            buffer_.append(buf, static_cast<std::size_t>(n));
        }
    }

    /// Reads until a line satisfies `pred`; returns every line read, the match last.
    std::vector<std::string> read_until(const std::function<bool(const json&)>& pred) {
        std::vector<std::string> lines;
        while (auto line = read_line()) {
            lines.push_back(*line);
            if (pred(json::parse(*line))) return lines;
        }
        ADD_FAILURE() << "stream ended before the expected record";
        return lines;
    }

private:
    int fd_ = -1;
    bool connected_ = false;
    std::string buffer_;
};

std::unique_ptr<BridgeServer> start_server() {
    BridgeServer::Options options;
    options.port = 0;
    auto server = BridgeServer::start(Simulation::create(SimConfig{}).value(), options);
    EXPECT_TRUE(server) << server.error().message;
    return std::move(server).value();
}

auto is_record(const std::string& channel, const std::string& detail_prefix) {
    return [=](const json& j) {
        return j.contains("channel") && j["channel"] == channel &&
               j["detail"].get<std::string>().starts_with(detail_prefix);
    };
}

TEST(BridgeServer, ArmThenTiltYieldsStateThenSmsOut) {
    auto server = start_server();
    Client client(server->port());
    ASSERT_TRUE(client.connected());
    client.send(R"({"cmd":"arm"})");
    auto armed = client.read_until(is_record("STATE", "phase=ARMED"));
    ASSERT_FALSE(armed.empty());
    client.send(R"({"cmd":"tilt","kind":"DOOR","deg":45})");
    auto alert = client.read_until(is_record("SMS_OUT", "from=+923330000001"));
    ASSERT_FALSE(alert.empty());
    auto j = json::parse(alert.back());
    EXPECT_NE(j["detail"].get<std::string>().find("ALERT DOOR"), std::string::npos);
    EXPECT_TRUE(j["at"].is_number());
    auto next = client.read_until(is_record("STATE", "phase=ALERTING"));
    EXPECT_FALSE(next.empty());
}

TEST(BridgeServer, TwoClientsSeeIdenticalStreams) {
    auto server = start_server();
    Client a(server->port());
    Client b(server->port());
    ASSERT_TRUE(a.connected());
    ASSERT_TRUE(b.connected());
    a.send(R"({"cmd":"arm"})");
    // Wait for b's connection to be accepted before the interesting records.
    a.read_until(is_record("STATE", "phase=ARMED"));
    b.send(R"({"cmd":"tilt","kind":"TRUNK","deg":90})");
    const auto sa = a.read_until(is_record("STATE", "phase=ALERTING"));
    const auto sb = b.read_until(is_record("STATE", "phase=ALERTING"));
    // a already consumed its prefix up to ARMED; compare from there on.
    auto from_armed = [](const std::vector<std::string>& v) {
        std::vector<std::string> out;
        bool on = false;
        for (const auto& line : v) {
            if (on) out.push_back(line);
            if (line.find("phase=ARMED") != std::string::npos) on = true;
        }
        return out;
    };
    EXPECT_EQ(sa, from_armed(sb));
    EXPECT_FALSE(sa.empty());
}

TEST(BridgeServer, MalformedLineGetsPrivateErrorAndSessionContinues) {
    auto server = start_server();
    Client bad(server->port());
    Client other(server->port());
    bad.send("{oops");
    auto reply = bad.read_until([](const json& j) { return j.contains("error"); });
    ASSERT_FALSE(reply.empty());
    EXPECT_EQ(json::parse(reply.back())["error"], "malformed JSON");

    bad.send(R"({"cmd":"arm"})");
    bad.read_until(is_record("STATE", "phase=ARMED"));
    for (const auto& line : other.read_until(is_record("STATE", "phase=ARMED"))) {
        EXPECT_FALSE(json::parse(line).contains("error")) << line;
    }
}

TEST(BridgeServer, LateClientReceivesHistory) {
    auto server = start_server();
    {
        Client early(server->port());
        early.send(R"({"cmd":"arm"})");
        early.read_until(is_record("STATE", "phase=ARMED"));
    }
    Client late(server->port());
    const auto lines = late.read_until(is_record("STATE", "phase=ARMED"));
    ASSERT_GE(lines.size(), 2u);
    EXPECT_TRUE(is_record("STATE", "phase=DISARMED")(json::parse(lines.front())));
}

TEST(BridgeServer, StopIsIdempotent) {
    auto server = start_server();
    server->stop();
    server->stop();
}

}  // namespace
}  // namespace carguard::sim
