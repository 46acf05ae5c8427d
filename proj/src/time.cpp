#include "carguard/time.hpp"

#include <charconv>
#include <chrono>

namespace carguard {

namespace {

constexpr std::chrono::sys_days kEpoch{std::chrono::year{2024} / std::chrono::January / 1};

bool all_digits(std::string_view s) {
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

}  // namespace

std::optional<VirtualTime> VirtualTime::parse_seconds(std::string_view text) {
    if (text.empty()) return std::nullopt;
    const auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || !all_digits(whole) || !all_digits(frac) || frac.size() > 3) return std::nullopt;
    if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
    if (whole.size() > 12) return std::nullopt;

    std::int64_t seconds = 0;
    std::from_chars(whole.data(), whole.data() + whole.size(), seconds);
    std::int64_t millis = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        millis = millis * 10 + (i < frac.size() ? frac[i] - '0' : 0);
    }
    return VirtualTime{seconds * 1000 + millis};
}

std::string VirtualTime::to_string() const {
    std::string out = ms_ < 0 ? "-" : "";
    const std::int64_t magnitude = ms_ < 0 ? -ms_ : ms_;
    out += std::to_string(magnitude / 1000);
    std::int64_t frac = magnitude % 1000;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 3 - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

CivilTime to_civil(VirtualTime t) {
    using namespace std::chrono;
    const milliseconds since_epoch{t.millis()};
    const auto day_point = floor<days>(kEpoch + since_epoch);
    const year_month_day ymd{day_point};
    const auto in_day = (kEpoch + since_epoch) - day_point;
    const auto total_ms = duration_cast<milliseconds>(in_day).count();
    return CivilTime{
        static_cast<int>(ymd.year()),
        static_cast<unsigned>(ymd.month()),
        static_cast<unsigned>(ymd.day()),
        static_cast<unsigned>(total_ms / 3'600'000),
        static_cast<unsigned>(total_ms / 60'000 % 60),
        static_cast<unsigned>(total_ms / 1000 % 60),
        static_cast<unsigned>(total_ms % 1000),
    };
}

std::optional<VirtualTime> from_civil(const CivilTime& civil) {
    using namespace std::chrono;
    const year_month_day ymd{year{civil.year}, month{civil.month}, day{civil.day}};
    if (!ymd.ok() || civil.hour > 23 || civil.minute > 59 || civil.second > 59 || civil.millis > 999) {
        return std::nullopt;
    }
    const auto since_epoch = sys_days{ymd} - kEpoch;
    if (since_epoch.count() < 0) return std::nullopt;
    const std::int64_t ms = duration_cast<milliseconds>(since_epoch).count() +
                            (static_cast<std::int64_t>(civil.hour) * 3600 + civil.minute * 60 + civil.second) * 1000 +
                            civil.millis;
    return VirtualTime::from_millis(ms);
}

}  // namespace carguard
