#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "carguard/time.hpp"

namespace carguard::sim {

struct TransportConfig {
    VirtualTime latency = VirtualTime::from_seconds(2);
    double loss_prob = 0.0;
    std::uint64_t seed = 1;
};

/// SMS network between the unit and phone endpoints: fixed latency, optional
/// random loss.
///
/// Loss decisions come from std::mt19937_64 seeded with `seed`. Every routed
/// message consumes exactly one 64-bit draw `x`, and the message is dropped
/// when `(x >> 11) * 2^-53 < loss_prob`. Both the engine and the conversion
/// are fully specified, so loss sequences reproduce on any platform.
class SmsTransport {
public:
    explicit SmsTransport(TransportConfig config) : config_(config), rng_(config.seed) {}

    /// Delivery time for a message sent at `sent_at`, or nullopt if lost.
    std::optional<VirtualTime> route(VirtualTime sent_at);

    [[nodiscard]] const TransportConfig& config() const { return config_; }

private:
    TransportConfig config_;
    std::mt19937_64 rng_;
};

}  // namespace carguard::sim
