#include "carguard/nmea.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace carguard::nmea {

namespace {

constexpr char kHexDigits[] = "0123456789ABCDEF";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

bool is_alnum(char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool is_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

/// Unsigned decimal: digits with an optional fractional part.
std::optional<double> parse_unsigned_decimal(std::string_view s) {
    const auto dot = s.find('.');
    const auto whole = s.substr(0, dot);
    const auto frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !is_digits(whole)) return std::nullopt;
    if (dot != std::string_view::npos && !is_digits(frac)) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<int> parse_unsigned_int(std::string_view s) {
    if (!is_digits(s)) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

bool valid_utc_time(std::string_view s) {
    if (s.empty()) return true;
    const auto dot = s.find('.');
    const auto hms = s.substr(0, dot);
    if (hms.size() != 6 || !is_digits(hms)) return false;
    if (dot != std::string_view::npos && !is_digits(s.substr(dot + 1))) return false;
    return true;
}

/// Reads a latitude/longitude pair starting at `index`. Both empty means no
/// position was reported.
Result<std::optional<std::pair<double, double>>, NmeaError> read_position(const std::vector<std::string>& f,
                                                                         std::size_t index) {
    const auto& lat = f[index];
    const auto& lat_hemi = f[index + 1];
    const auto& lon = f[index + 2];
    const auto& lon_hemi = f[index + 3];
    if (lat.empty() && lat_hemi.empty() && lon.empty() && lon_hemi.empty()) {
        return std::optional<std::pair<double, double>>{};
    }
    if (lat_hemi.size() != 1 || (lat_hemi[0] != 'N' && lat_hemi[0] != 'S')) {
        return make_error(NmeaError::BadFormat, "latitude hemisphere '" + lat_hemi + "'");
    }
    if (lon_hemi.size() != 1 || (lon_hemi[0] != 'E' && lon_hemi[0] != 'W')) {
        return make_error(NmeaError::BadFormat, "longitude hemisphere '" + lon_hemi + "'");
    }
    auto latitude = coord_to_decimal(lat, lat_hemi[0]);
    if (!latitude) return latitude.error();
    auto longitude = coord_to_decimal(lon, lon_hemi[0]);
    if (!longitude) return longitude.error();
    if (std::fabs(*latitude) > 90.0) return make_error(NmeaError::OutOfRange, "latitude " + lat);
    if (std::fabs(*longitude) > 180.0) return make_error(NmeaError::OutOfRange, "longitude " + lon);
    return std::optional<std::pair<double, double>>{std::pair{*latitude, *longitude}};
}

/// Appends the value as an unsigned integer part and six fraction digits.
void append_fixed6(std::string& out, double value) {
    const double scaled = std::round(value * 1e6);  // round() is half away from zero
    if (scaled < 0.0) out += '-';
    const auto magnitude = static_cast<long long>(std::fabs(scaled));
    const auto whole = std::to_string(magnitude / 1'000'000);
    auto frac = std::to_string(magnitude % 1'000'000);
    frac.insert(0, 6 - frac.size(), '0');
    out += whole;
    out += '.';
    out += frac;
}

}  // namespace

std::string_view to_string(NmeaError e) {
    switch (e) {
        case NmeaError::MissingStart: return "MissingStart";
        case NmeaError::BadChecksum: return "BadChecksum";
        case NmeaError::Malformed: return "Malformed";
        case NmeaError::WrongType: return "WrongType";
        case NmeaError::FieldCount: return "FieldCount";
        case NmeaError::BadFormat: return "BadFormat";
        case NmeaError::MinutesOutOfRange: return "MinutesOutOfRange";
        case NmeaError::OutOfRange: return "OutOfRange";
    }
    return "Unknown";
}

RawSentence RawSentence::make(std::string id, std::vector<std::string> fields) {
    RawSentence s{std::move(id), std::move(fields), 0};
    s.checksum = nmea::checksum(s.payload());
    return s;
}

std::string RawSentence::payload() const {
    std::string out = id;
    for (const auto& f : fields) {
        out += ',';
        out += f;
    }
    return out;
}

std::string_view RawSentence::type() const {
    std::string_view v = id;
    return v.size() >= 3 ? v.substr(v.size() - 3) : v;
}

std::uint8_t checksum(std::string_view payload) {
    std::uint8_t sum = 0;
    for (char c : payload) sum ^= static_cast<std::uint8_t>(c);
    return sum;
}

std::string serialize(const RawSentence& sentence) {
    const auto payload = sentence.payload();
    const auto sum = checksum(payload);
    std::string out;
    out.reserve(payload.size() + 6);
    out += '$';
    out += payload;
    out += '*';
    out += kHexDigits[sum >> 4];
    out += kHexDigits[sum & 0x0F];
    out += "\r\n";
    return out;
}

Result<RawSentence, NmeaError> parse_sentence(std::string_view line) {
    if (line.empty() || line.front() != '$') return make_error(NmeaError::MissingStart, "line does not start with '$'");

    if (line.size() >= 2 && line.substr(line.size() - 2) == "\r\n") line.remove_suffix(2);

    const auto star = line.find('*');
    if (star == std::string_view::npos) return make_error(NmeaError::Malformed, "no '*' checksum delimiter");

    const auto payload = line.substr(1, star - 1);
    const auto tail = line.substr(star + 1);
    for (char c : payload) {
        if (c == '$' || c == '\r' || c == '\n') return make_error(NmeaError::Malformed, "illegal byte in payload");
    }
    if (tail.size() != 2) return make_error(NmeaError::Malformed, "checksum must be two hex digits");
    const int hi = hex_value(tail[0]);
    const int lo = hex_value(tail[1]);
    if (hi < 0 || lo < 0) return make_error(NmeaError::Malformed, "non-hex checksum digit");

    RawSentence sentence;
    std::size_t start = 0;
    bool first = true;
    while (true) {
        const auto comma = payload.find(',', start);
        auto part = payload.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (first) {
            sentence.id = std::string(part);
            first = false;
        } else {
            sentence.fields.emplace_back(part);
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (sentence.id.size() != 5) return make_error(NmeaError::Malformed, "identifier must be 5 characters");
    for (char c : sentence.id) {
        if (!is_alnum(c)) return make_error(NmeaError::Malformed, "identifier must be alphanumeric");
    }

    const auto stated = static_cast<std::uint8_t>(hi << 4 | lo);
    const auto computed = checksum(payload);
    if (stated != computed) {
        std::string msg = "stated ";
        msg += tail;
        msg += " computed ";
        msg += kHexDigits[computed >> 4];
        msg += kHexDigits[computed & 0x0F];
        return make_error(NmeaError::BadChecksum, std::move(msg));
    }
    sentence.checksum = computed;
    return sentence;
}

Result<double, NmeaError> coord_to_decimal(std::string_view field, char hemisphere) {
    if (hemisphere != 'N' && hemisphere != 'S' && hemisphere != 'E' && hemisphere != 'W') {
        return make_error(NmeaError::BadFormat, std::string("hemisphere '") + hemisphere + "'");
    }
    const auto dot = field.find('.');
    const auto whole = field.substr(0, dot);
    const auto frac = dot == std::string_view::npos ? std::string_view{} : field.substr(dot + 1);
    if (whole.size() < 2 || !is_digits(whole) || (dot != std::string_view::npos && !is_digits(frac))) {
        return make_error(NmeaError::BadFormat, "coordinate '" + std::string(field) + "'");
    }

    const auto degree_digits = whole.substr(0, whole.size() - 2);
    int degrees = 0;
    if (!degree_digits.empty()) {
        auto parsed = parse_unsigned_int(degree_digits);
        if (!parsed) return make_error(NmeaError::BadFormat, "degrees '" + std::string(degree_digits) + "'");
        degrees = *parsed;
    }
    const auto minutes = parse_unsigned_decimal(field.substr(whole.size() - 2));
    if (!minutes) return make_error(NmeaError::BadFormat, "minutes in '" + std::string(field) + "'");
    if (*minutes >= 60.0) return make_error(NmeaError::MinutesOutOfRange, "minutes in '" + std::string(field) + "'");

    const double value = degrees + *minutes / 60.0;
    return (hemisphere == 'S' || hemisphere == 'W') ? -value : value;
}

Result<GpsFix, NmeaError> parse_rmc(const RawSentence& sentence) {
    if (sentence.type() != "RMC") return make_error(NmeaError::WrongType, sentence.id);
    const auto& f = sentence.fields;
    if (f.size() < 9) return make_error(NmeaError::FieldCount, "RMC needs 9 fields, got " + std::to_string(f.size()));

    GpsFix fix;
    if (!valid_utc_time(f[0])) return make_error(NmeaError::BadFormat, "time '" + f[0] + "'");
    fix.utc_time = f[0];
    if (f[1] != "A" && f[1] != "V") return make_error(NmeaError::BadFormat, "status '" + f[1] + "'");

    auto position = read_position(f, 2);
    if (!position) return position.error();
    fix.valid = f[1] == "A";
    if (fix.valid && !position->has_value()) return make_error(NmeaError::BadFormat, "active fix without position");
    if (position->has_value()) {
        fix.latitude = (*position)->first;
        fix.longitude = (*position)->second;
    }

    if (f[6].empty()) {
        fix.speed_knots = 0.0;
    } else {
        auto speed = parse_unsigned_decimal(f[6]);
        if (!speed) return make_error(NmeaError::BadFormat, "speed '" + f[6] + "'");
        fix.speed_knots = *speed;
    }
    return fix;
}

Result<GpsFix, NmeaError> parse_gga(const RawSentence& sentence) {
    if (sentence.type() != "GGA") return make_error(NmeaError::WrongType, sentence.id);
    const auto& f = sentence.fields;
    if (f.size() < 7) return make_error(NmeaError::FieldCount, "GGA needs 7 fields, got " + std::to_string(f.size()));

    GpsFix fix;
    if (!valid_utc_time(f[0])) return make_error(NmeaError::BadFormat, "time '" + f[0] + "'");
    fix.utc_time = f[0];

    auto quality = parse_unsigned_int(f[5]);
    if (!quality) return make_error(NmeaError::BadFormat, "fix quality '" + f[5] + "'");
    fix.valid = *quality > 0;

    auto position = read_position(f, 1);
    if (!position) return position.error();
    if (fix.valid && !position->has_value()) return make_error(NmeaError::BadFormat, "fix quality > 0 without position");
    if (position->has_value()) {
        fix.latitude = (*position)->first;
        fix.longitude = (*position)->second;
    }

    if (f[6].empty()) {
        fix.satellites = 0;
    } else {
        auto sats = parse_unsigned_int(f[6]);
        if (!sats) return make_error(NmeaError::BadFormat, "satellites '" + f[6] + "'");
        fix.satellites = *sats;
    }
    return fix;
}

Result<std::optional<GpsFix>, NmeaError> decode_line(std::string_view line) {
    auto sentence = parse_sentence(line);
    if (!sentence) return sentence.error();
    const auto type = sentence->type();
    if (type == "RMC" || type == "GGA") {
        auto fix = type == "RMC" ? parse_rmc(*sentence) : parse_gga(*sentence);
        if (!fix) return fix.error();
        return std::optional<GpsFix>{std::move(fix).value()};
    }
    return std::optional<GpsFix>{};
}

std::string render_fix_text(const GpsFix& fix) {
    if (!fix.valid) return "LOC UNAVAILABLE";
    std::string out = "LOC ";
    append_fixed6(out, fix.latitude);
    out += ' ';
    append_fixed6(out, fix.longitude);
    return out;
}

CoordinateField encode_coordinate(double degrees, bool is_latitude) {
    const char hemisphere = is_latitude ? (degrees < 0 ? 'S' : 'N') : (degrees < 0 ? 'W' : 'E');
    // ten-thousandths of an arc minute
    const auto units = std::llround(std::fabs(degrees) * 60.0 * 10000.0);
    const auto whole_degrees = units / 600000;
    const auto minute_units = units % 600000;

    auto deg_text = std::to_string(whole_degrees);
    deg_text.insert(0, (is_latitude ? 2 : 3) - std::min<std::size_t>(deg_text.size(), is_latitude ? 2 : 3), '0');
    auto min_whole = std::to_string(minute_units / 10000);
    min_whole.insert(0, 2 - min_whole.size(), '0');
    auto min_frac = std::to_string(minute_units % 10000);
    min_frac.insert(0, 4 - min_frac.size(), '0');
    return CoordinateField{deg_text + min_whole + "." + min_frac, hemisphere};
}

}  // namespace carguard::nmea
