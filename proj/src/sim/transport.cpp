#include "carguard/sim/transport.hpp"

namespace carguard::sim {

std::optional<VirtualTime> SmsTransport::route(VirtualTime sent_at) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    if (u < config_.loss_prob) return std::nullopt;
    return sent_at + config_.latency;
}

}  // namespace carguard::sim
