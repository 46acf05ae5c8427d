// carguard: run theft-control scenarios, serve the console bridge, decode NMEA.
//
//   carguard run <scenario> [--seed N] [--horizon S] [--latency S] [--loss P]
//                           [--whitelist num,num] [--transcript out]
//   carguard serve [--port P] [--speed R] [same simulation flags]
//   carguard decode-nmea <file>
//
// Exit status: 0 on success, 2 when the scenario file does not parse, 1 for
// other failures.

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "carguard/nmea.hpp"
#include "carguard/sim/bridge.hpp"
#include "carguard/sim/scenario.hpp"
#include "carguard/sim/simulation.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitScenarioParse = 2;

volatile std::sig_atomic_t g_interrupted = 0;

struct SimFlags {
    std::uint64_t seed = 1;
    std::string horizon;
    std::string latency = "2";
    double loss = 0.0;
    std::vector<std::string> whitelist;
    std::string unit;

    void attach(CLI::App* app) {
        app->add_option("--seed", seed, "SMS loss RNG seed");
        app->add_option("--horizon", horizon, "stop at this virtual time (seconds)");
        app->add_option("--latency", latency, "SMS delivery latency (seconds)");
        app->add_option("--loss", loss, "SMS loss probability")->check(CLI::Range(0.0, 1.0));
        app->add_option("--whitelist", whitelist, "authorized owner numbers")->delimiter(',');
        app->add_option("--unit", unit, "the unit's own SIM number");
    }

    bool to_config(carguard::sim::SimConfig& config) const {
        config.transport.seed = seed;
        config.transport.loss_prob = loss;
        auto lat = carguard::VirtualTime::parse_seconds(latency);
        if (!lat) {
            std::cerr << "error: bad --latency '" << latency << "'\n";
            return false;
        }
        config.transport.latency = *lat;
        if (!horizon.empty()) {
            auto h = carguard::VirtualTime::parse_seconds(horizon);
            if (!h) {
                std::cerr << "error: bad --horizon '" << horizon << "'\n";
                return false;
            }
            config.horizon = *h;
        }
        if (!whitelist.empty()) config.whitelist = whitelist;
        if (!unit.empty()) config.unit_number = unit;
        return true;
    }
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_command(const std::string& scenario_path, const SimFlags& flags, const std::string& transcript_path) {
    auto text = read_file(scenario_path);
    if (!text) {
        std::cerr << "error: cannot read " << scenario_path << "\n";
        return kExitFailure;
    }
    auto scenario = carguard::sim::parse_scenario(*text);
    if (!scenario) {
        std::cerr << scenario_path << ": " << scenario.error().message << "\n";
        return kExitScenarioParse;
    }
    carguard::sim::SimConfig config;
    if (!flags.to_config(config)) return kExitFailure;
    auto sim = carguard::sim::Simulation::create(config, std::move(scenario).value());
    if (!sim) {
        std::cerr << "error: " << sim.error().message << "\n";
        return kExitFailure;
    }
    const auto transcript = (*sim)->run();
    if (transcript.horizon_exceeded) {
        std::cerr << "note: " << transcript.pending_at_horizon << " event(s) still pending at the horizon\n";
    }
    if (transcript_path.empty()) {
        std::cout << transcript.serialize();
    } else {
        std::ofstream out(transcript_path, std::ios::binary);
        out << transcript.serialize();
        if (!out) {
            std::cerr << "error: cannot write " << transcript_path << "\n";
            return kExitFailure;
        }
    }
    return 0;
}

int serve_command(const SimFlags& flags, std::uint16_t port, double speed) {
    carguard::sim::SimConfig config;
    if (!flags.to_config(config)) return kExitFailure;
    auto sim = carguard::sim::Simulation::create(config);
    if (!sim) {
        std::cerr << "error: " << sim.error().message << "\n";
        return kExitFailure;
    }
    carguard::sim::BridgeServer::Options options;
    options.port = port;
    options.speed = speed;
    auto server = carguard::sim::BridgeServer::start(std::move(sim).value(), options);
    if (!server) {
        std::cerr << "error: " << server.error().message << "\n";
        return kExitFailure;
    }
    std::cerr << "bridge listening on " << options.bind_address << ":" << (*server)->port() << "\n";
    std::signal(SIGINT, [](int) { g_interrupted = 1; });
    std::signal(SIGTERM, [](int) { g_interrupted = 1; });
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    (*server)->stop();
    return 0;
}

int decode_command(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << path << "\n";
        return kExitFailure;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        line += '\n';  // getline dropped the LF; CR, if any, is still there
        if (line.size() >= 2 && line[line.size() - 2] != '\r') line.pop_back();
        std::cout << line_no << ": ";
        auto sentence = carguard::nmea::parse_sentence(line);
        if (!sentence) {
            std::cout << "error " << carguard::nmea::to_string(sentence.error().code) << " ("
                      << sentence.error().message << ")\n";
            continue;
        }
        auto decoded = carguard::nmea::decode_line(line);
        if (!decoded) {
            std::cout << sentence->id << " error " << carguard::nmea::to_string(decoded.error().code) << " ("
                      << decoded.error().message << ")\n";
            continue;
        }
        if (!decoded->has_value()) {
            std::cout << sentence->id << " ignored\n";
            continue;
        }
        const auto& fix = **decoded;
        std::cout << sentence->id << " valid=" << (fix.valid ? 1 : 0) << " time=" << fix.utc_time << " "
                  << carguard::nmea::render_fix_text(fix);
        if (fix.speed_knots) std::cout << " speed_kn=" << *fix.speed_knots;
        if (fix.satellites) std::cout << " sats=" << *fix.satellites;
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vehicle intrusion and theft control unit simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string transcript_path;
    SimFlags run_flags;
    auto* run = app.add_subcommand("run", "run a scenario file in batch mode and print the transcript");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--transcript", transcript_path, "write the transcript here instead of stdout");
    run_flags.attach(run);

    SimFlags serve_flags;
    std::uint16_t port = 7070;
    double speed = 1.0;
    auto* serve = app.add_subcommand("serve", "run interactively behind the JSON line bridge");
    serve->add_option("--port", port, "TCP port (0 = ephemeral)");
    serve->add_option("--speed", speed, "virtual seconds per wall-clock second")->check(CLI::PositiveNumber);
    serve_flags.attach(serve);

    std::string nmea_path;
    auto* decode = app.add_subcommand("decode-nmea", "decode a file of NMEA-0183 sentences");
    decode->add_option("file", nmea_path, "NMEA log")->required();

    CLI11_PARSE(app, argc, argv);

    if (*run) return run_command(scenario_path, run_flags, transcript_path);
    if (*serve) return serve_command(serve_flags, port, speed);
    if (*decode) return decode_command(nmea_path);
    return kExitFailure;
}
