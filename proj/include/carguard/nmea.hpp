#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carguard/result.hpp"

/// NMEA-0183 sentence codec. Only RMC and GGA are decoded into fixes; any
/// other well-formed sentence parses structurally and is otherwise ignored.
namespace carguard::nmea {

enum class NmeaError {
    MissingStart,
    BadChecksum,
    Malformed,
    WrongType,
    FieldCount,
    BadFormat,
    MinutesOutOfRange,
    OutOfRange,
};

std::string_view to_string(NmeaError e);

/// One framed sentence. `id` is the talker+type (e.g. "GPRMC"); `fields` are
/// the comma-separated values following it, with empty fields preserved.
struct RawSentence {
    std::string id;
    std::vector<std::string> fields;
    std::uint8_t checksum = 0;

    /// Builds a sentence and fills in the checksum of its payload.
    static RawSentence make(std::string id, std::vector<std::string> fields);

    /// The bytes between `$` and `*`.
    [[nodiscard]] std::string payload() const;
    /// Sentence type without talker ("RMC" for "GPRMC").
    [[nodiscard]] std::string_view type() const;

    bool operator==(const RawSentence&) const = default;
};

/// XOR fold of all payload bytes.
std::uint8_t checksum(std::string_view payload);

/// `$` + payload + `*` + two uppercase hex digits + CRLF.
std::string serialize(const RawSentence& sentence);

/// Total over arbitrary bytes. A trailing CRLF is optional; lowercase
/// checksum digits are accepted.
Result<RawSentence, NmeaError> parse_sentence(std::string_view line);

/// Converts "dddmm.mmmm" plus hemisphere (N/S/E/W) into signed decimal degrees.
Result<double, NmeaError> coord_to_decimal(std::string_view field, char hemisphere);

struct GpsFix {
    double latitude = 0.0;
    double longitude = 0.0;
    std::string utc_time;  // hhmmss[.sss], may be empty
    bool valid = false;
    std::optional<double> speed_knots;
    std::optional<int> satellites;

    bool operator==(const GpsFix&) const = default;
};

Result<GpsFix, NmeaError> parse_rmc(const RawSentence& sentence);
Result<GpsFix, NmeaError> parse_gga(const RawSentence& sentence);

/// Parses a line and decodes it if it is RMC or GGA. Returns an empty
/// optional for other well-formed sentence types.
Result<std::optional<GpsFix>, NmeaError> decode_line(std::string_view line);

/// "LOC <lat> <lon>" with six decimals (half away from zero), or
/// "LOC UNAVAILABLE" when the fix is not valid.
std::string render_fix_text(const GpsFix& fix);

/// Encodes signed decimal degrees as an NMEA coordinate field and hemisphere
/// letter, with four decimals of minutes.
struct CoordinateField {
    std::string value;
    char hemisphere;
};
CoordinateField encode_coordinate(double degrees, bool is_latitude);

}  // namespace carguard::nmea
