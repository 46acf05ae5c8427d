#include "carguard/nmea.hpp"

#include <gtest/gtest.h>

#include <random>

namespace carguard::nmea {
namespace {

// Expected values below were computed outside the implementation with an
// independent XOR fold / decimal arithmetic (Python), then frozen here.
constexpr char kRmcPayload[] = "GPRMC,123519,A,4807.038,N,01131.000,E,022.4,084.4,230394,,";
constexpr char kGgaPayload[] = "GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,";

TEST(Checksum, EmptyPayloadIsZero) { EXPECT_EQ(checksum(""), 0x00); }
TEST(Checksum, SingleByteIsIdentity) { EXPECT_EQ(checksum("A"), 0x41); }
TEST(Checksum, TwoBytesXor) { EXPECT_EQ(checksum("AB"), 0x03); }
TEST(Checksum, KnownSentences) {
    EXPECT_EQ(checksum(kRmcPayload), 0x11);
    EXPECT_EQ(checksum(kGgaPayload), 0x47);
}

TEST(Checksum, PayloadConcatenatedWithItselfCancels) {
    std::mt19937 rng(7);
    for (int i = 0; i < 500; ++i) {
        std::string p(rng() % 40, '\0');
        for (auto& c : p) c = static_cast<char>(rng() % 256);
        EXPECT_EQ(checksum(p + p), 0);
    }
}

TEST(ParseSentence, MinimalSentenceHasNoFields) {
    const std::string line = "$GPXXX*" + std::string(1, "0123456789ABCDEF"[checksum("GPXXX") >> 4]) +
                             "0123456789ABCDEF"[checksum("GPXXX") & 0xF] + "\r\n";
    auto s = parse_sentence(line);
    ASSERT_TRUE(s) << s.error().message;
    EXPECT_EQ(s->id, "GPXXX");
    EXPECT_TRUE(s->fields.empty());
}

TEST(ParseSentence, RmcExampleSplitsAllFields) {
    auto s = parse_sentence(std::string("$") + kRmcPayload + "*11");
    ASSERT_TRUE(s) << s.error().message;
    EXPECT_EQ(s->id, "GPRMC");
    // 12 comma-separated elements: the identifier plus 11 data fields,
    // the last two empty.
    ASSERT_EQ(s->fields.size(), 11u);
    EXPECT_EQ(s->fields[0], "123519");
    EXPECT_EQ(s->fields[8], "230394");
    EXPECT_EQ(s->fields[9], "");
    EXPECT_EQ(s->fields[10], "");
    EXPECT_EQ(s->checksum, 0x11);
}

TEST(ParseSentence, LowercaseChecksumAccepted) {
    // XOR of "GPZDA,h" is 0x0C
    auto s = parse_sentence("$GPZDA,h*0c");
    ASSERT_TRUE(s) << s.error().message;
    EXPECT_EQ(s->checksum, 0x0C);
    EXPECT_EQ(s->fields, std::vector<std::string>{"h"});
    EXPECT_EQ(serialize(*s), "$GPZDA,h*0C\r\n");
}

TEST(ParseSentence, FlippedChecksumIsBadChecksum) {
    auto s = parse_sentence(std::string("$") + kRmcPayload + "*10");
    ASSERT_FALSE(s);
    EXPECT_EQ(s.error().code, NmeaError::BadChecksum);
}

TEST(ParseSentence, Errors) {
    EXPECT_EQ(parse_sentence("").error().code, NmeaError::MissingStart);
    EXPECT_EQ(parse_sentence("GPRMC,1*00").error().code, NmeaError::MissingStart);
    EXPECT_EQ(parse_sentence("$GPRMC,1").error().code, NmeaError::Malformed);
    EXPECT_EQ(parse_sentence("$GPRMC,1*G0").error().code, NmeaError::Malformed);
    EXPECT_EQ(parse_sentence("$GPRMC,1*0").error().code, NmeaError::Malformed);
    EXPECT_EQ(parse_sentence("$GPRMC,1*000").error().code, NmeaError::Malformed);
    EXPECT_EQ(parse_sentence("$GPR\rMC,1*00").error().code, NmeaError::Malformed);
    EXPECT_EQ(parse_sentence("$GPRMC,1$*00").error().code, NmeaError::Malformed);
    EXPECT_EQ(parse_sentence("$GPRMC,1*00\n").error().code, NmeaError::Malformed);
    EXPECT_EQ(parse_sentence("$GPS*00").error().code, NmeaError::Malformed);
}

TEST(ParseSentence, SerializeRoundTripOverRandomSentences) {
    std::mt19937 rng(11);
    const std::string alnum = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    for (int i = 0; i < 2000; ++i) {
        std::string id(5, 'A');
        for (auto& c : id) c = alnum[rng() % alnum.size()];
        std::vector<std::string> fields(rng() % 20);
        for (auto& f : fields) {
            f.resize(rng() % 12);
            for (auto& c : f) {
                do {
                    c = static_cast<char>(rng() % 256);
                } while (c == '$' || c == '*' || c == ',' || c == '\r' || c == '\n');
            }
        }
        const auto sentence = RawSentence::make(id, fields);
        auto parsed = parse_sentence(serialize(sentence));
        ASSERT_TRUE(parsed) << parsed.error().message;
        EXPECT_EQ(*parsed, sentence);
    }
}

TEST(ParseSentence, NeverAbortsOnArbitraryBytes) {
    std::mt19937 rng(13);
    for (int i = 0; i < 5000; ++i) {
        std::string line(rng() % 90, '\0');
        for (auto& c : line) c = static_cast<char>(rng() % 256);
        if (i % 2 == 0 && !line.empty()) line[0] = '$';
        auto parsed = parse_sentence(line);
        if (parsed) EXPECT_EQ(parsed->checksum, checksum(parsed->payload()));
    }
}

TEST(CoordToDecimal, Examples) {
    EXPECT_DOUBLE_EQ(*coord_to_decimal("0000.0000", 'N'), 0.0);
    EXPECT_NEAR(*coord_to_decimal("4916.4500", 'N'), 49.2741667, 1e-6);
    EXPECT_DOUBLE_EQ(*coord_to_decimal("12300.0000", 'W'), -123.0);
    EXPECT_NEAR(*coord_to_decimal("4807.038", 'S'), -48.1173, 1e-9);
}

TEST(CoordToDecimal, Errors) {
    EXPECT_EQ(coord_to_decimal("49x6.45", 'N').error().code, NmeaError::BadFormat);
    EXPECT_EQ(coord_to_decimal("", 'N').error().code, NmeaError::BadFormat);
    EXPECT_EQ(coord_to_decimal("4916.", 'N').error().code, NmeaError::BadFormat);
    EXPECT_EQ(coord_to_decimal("4916.45", 'Q').error().code, NmeaError::BadFormat);
    EXPECT_EQ(coord_to_decimal("4960.0000", 'N').error().code, NmeaError::MinutesOutOfRange);
    EXPECT_EQ(coord_to_decimal("4999.9", 'N').error().code, NmeaError::MinutesOutOfRange);
}

TEST(ParseRmc, NoFixSentence) {
    auto fix = parse_rmc(RawSentence::make("GPRMC", {"123519", "V", "", "", "", "", "", "", "230394", "", ""}));
    ASSERT_TRUE(fix) << fix.error().message;
    EXPECT_FALSE(fix->valid);
}

TEST(ParseRmc, ExampleSentence) {
    auto s = parse_sentence(std::string("$") + kRmcPayload + "*11");
    auto fix = parse_rmc(*s);
    ASSERT_TRUE(fix) << fix.error().message;
    EXPECT_TRUE(fix->valid);
    EXPECT_NEAR(fix->latitude, 48.1173, 1e-9);
    EXPECT_NEAR(fix->longitude, 11.5166667, 1e-6);
    EXPECT_DOUBLE_EQ(*fix->speed_knots, 22.4);
    EXPECT_EQ(fix->utc_time, "123519");
    EXPECT_EQ(nmea::render_fix_text(*fix), "LOC 48.117300 11.516667");
}

TEST(ParseRmc, Errors) {
    EXPECT_EQ(parse_rmc(RawSentence::make("GPRMC", {"1", "A", "2", "N", "3"})).error().code, NmeaError::FieldCount);
    EXPECT_EQ(parse_rmc(RawSentence::make("GPGGA", {})).error().code, NmeaError::WrongType);
    EXPECT_EQ(parse_rmc(RawSentence::make("GPRMC", {"123519", "A", "4807.038", "N", "01131.000", "X", "", "", "230394"}))
                  .error()
                  .code,
              NmeaError::BadFormat);
    EXPECT_EQ(parse_rmc(RawSentence::make("GPRMC", {"123519", "A", "4860.0", "N", "01131.000", "E", "", "", "230394"}))
                  .error()
                  .code,
              NmeaError::MinutesOutOfRange);
    EXPECT_EQ(parse_rmc(RawSentence::make("GPRMC", {"123519", "A", "9100.0", "N", "01131.000", "E", "", "", "230394"}))
                  .error()
                  .code,
              NmeaError::OutOfRange);
    EXPECT_EQ(parse_rmc(RawSentence::make("GPRMC", {"123519", "A", "", "", "", "", "", "", "230394"})).error().code,
              NmeaError::BadFormat);
}

TEST(ParseGga, QualityZeroIsInvalid) {
    auto fix = parse_gga(RawSentence::make("GPGGA", {"123519", "", "", "", "", "0", "00"}));
    ASSERT_TRUE(fix) << fix.error().message;
    EXPECT_FALSE(fix->valid);
    EXPECT_EQ(fix->satellites, 0);
}

TEST(ParseGga, ExampleSentence) {
    auto fix = parse_gga(*parse_sentence(std::string("$") + kGgaPayload + "*47"));
    ASSERT_TRUE(fix) << fix.error().message;
    EXPECT_TRUE(fix->valid);
    EXPECT_EQ(fix->satellites, 8);
    EXPECT_NEAR(fix->latitude, 48.1173, 1e-9);
    EXPECT_NEAR(fix->longitude, 11.5166667, 1e-6);
}

TEST(ParseGga, NonNumericSatellitesRejected) {
    auto fix = parse_gga(RawSentence::make("GPGGA", {"123519", "4807.038", "N", "01131.000", "E", "1", "eight"}));
    ASSERT_FALSE(fix);
    EXPECT_EQ(fix.error().code, NmeaError::BadFormat);
    EXPECT_EQ(parse_gga(RawSentence::make("GPGGA", {"123519", "4807.038"})).error().code, NmeaError::FieldCount);
}

TEST(DecodeLine, OtherSentenceTypesAreIgnored) {
    auto out = decode_line(serialize(RawSentence::make("GPGSV", {"3", "1", "11"})));
    ASSERT_TRUE(out);
    EXPECT_FALSE(out->has_value());
}

TEST(RenderFixText, Examples) {
    GpsFix fix;
    fix.valid = true;
    EXPECT_EQ(render_fix_text(fix), "LOC 0.000000 0.000000");
    fix.latitude = 49.2741667;
    fix.longitude = 11.5166667;
    EXPECT_EQ(render_fix_text(fix), "LOC 49.274167 11.516667");
    fix.latitude = -123.0;
    fix.longitude = -0.0000004;
    EXPECT_EQ(render_fix_text(fix), "LOC -123.000000 0.000000");
    fix.longitude = -0.0000006;
    EXPECT_EQ(render_fix_text(fix), "LOC -123.000000 -0.000001");
    fix.valid = false;
    EXPECT_EQ(render_fix_text(fix), "LOC UNAVAILABLE");
}

TEST(EncodeCoordinate, RoundTripsThroughParser) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> lat(-90.0, 90.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    for (int i = 0; i < 1000; ++i) {
        const double la = lat(rng);
        const double lo = lon(rng);
        auto ef = encode_coordinate(la, true);
        auto of = encode_coordinate(lo, false);
        // four decimals of minutes: 1e-4 / 60 degrees worst-case rounding
        EXPECT_NEAR(*coord_to_decimal(ef.value, ef.hemisphere), la, 1e-4 / 60 / 2 + 1e-12);
        EXPECT_NEAR(*coord_to_decimal(of.value, of.hemisphere), lo, 1e-4 / 60 / 2 + 1e-12);
    }
    EXPECT_EQ(encode_coordinate(-123.0, false).value, "12300.0000");
    EXPECT_EQ(encode_coordinate(-123.0, false).hemisphere, 'W');
    EXPECT_EQ(encode_coordinate(49.2741667, true).value, "4916.4500");
}

}  // namespace
}  // namespace carguard::nmea
