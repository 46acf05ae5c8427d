#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace carguard {

/// Simulated time with millisecond resolution. Stored as an integer so that
/// cadence arithmetic (deadline + 30 s) is exact.
class VirtualTime {
public:
    constexpr VirtualTime() = default;

    static constexpr VirtualTime from_millis(std::int64_t ms) { return VirtualTime{ms}; }
    static constexpr VirtualTime from_seconds(std::int64_t s) { return VirtualTime{s * 1000}; }

    /// Parses a non-negative decimal seconds value with at most three fractional digits.
    static std::optional<VirtualTime> parse_seconds(std::string_view text);

    [[nodiscard]] constexpr std::int64_t millis() const { return ms_; }
    [[nodiscard]] constexpr double seconds() const { return static_cast<double>(ms_) / 1000.0; }
    [[nodiscard]] constexpr std::int64_t whole_seconds() const { return ms_ / 1000; }

    /// Shortest decimal rendering: "5", "5.2", "0.001".
    [[nodiscard]] std::string to_string() const;

    constexpr VirtualTime operator+(VirtualTime other) const { return VirtualTime{ms_ + other.ms_}; }
    constexpr VirtualTime operator-(VirtualTime other) const { return VirtualTime{ms_ - other.ms_}; }
    constexpr VirtualTime& operator+=(VirtualTime other) {
        ms_ += other.ms_;
        return *this;
    }

    constexpr auto operator<=>(const VirtualTime&) const = default;

private:
    constexpr explicit VirtualTime(std::int64_t ms) : ms_(ms) {}
    std::int64_t ms_ = 0;
};

/// Broken-down UTC calendar time for a virtual timestamp. Virtual t=0 is
/// 2024-01-01T00:00:00Z.
struct CivilTime {
    int year;
    unsigned month;
    unsigned day;
    unsigned hour;
    unsigned minute;
    unsigned second;
    unsigned millis;
};

CivilTime to_civil(VirtualTime t);

/// Inverse of to_civil; nullopt for dates before the epoch or invalid fields.
std::optional<VirtualTime> from_civil(const CivilTime& civil);

}  // namespace carguard
