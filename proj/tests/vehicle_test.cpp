#include "carguard/nmea.hpp"
#include "carguard/vehicle.hpp"

#include <gtest/gtest.h>

#include <random>

namespace carguard {
namespace {

VirtualTime ms(std::int64_t v) { return VirtualTime::from_millis(v); }

MercurySwitch door() {
    MercurySwitch sw;
    sw.location = IntrusionKind::Door;
    return sw;
}

TEST(Tilt, CrossingThresholdClosesWithOneEvent) {
    auto r = set_tilt(door(), 45.0, ms(1000));
    ASSERT_TRUE(r);
    EXPECT_TRUE(r->sw.closed);
    ASSERT_TRUE(r->event);
    EXPECT_EQ(*r->event, (SensorEvent{IntrusionKind::Door, true, ms(1000)}));
}

TEST(Tilt, ExactlyThresholdCloses) {
    EXPECT_TRUE(set_tilt(door(), 30.0, ms(0))->sw.closed);
    EXPECT_FALSE(set_tilt(door(), 29.999, ms(0))->sw.closed);
}

// Reference model written independently of set_tilt: a two-state machine
// with thresholds 30 (close) and 25 (open), no debounce.
bool reference_contact(bool contact, double tilt) { return contact ? !(tilt < 25.0) : tilt >= 30.0; }

TEST(Tilt, HysteresisTable) {
    struct Row {
        double from;
        double to;
    };
    const Row rows[] = {{0, 45},  {45, 28}, {45, 25}, {45, 24.9}, {28, 29}, {0, 28},
                        {0, 30},  {30, 25}, {30, 0},  {90, 180},  {45, 31}, {10, 29.9}};
    for (const auto& row : rows) {
        auto sw = door();
        sw = set_tilt(sw, row.from, ms(0))->sw;
        const bool before = reference_contact(false, row.from);
        ASSERT_EQ(sw.closed, before);
        auto r = set_tilt(sw, row.to, ms(1000));
        ASSERT_TRUE(r);
        const bool after = reference_contact(before, row.to);
        EXPECT_EQ(r->sw.closed, after) << row.from << " -> " << row.to;
        EXPECT_EQ(r->event.has_value(), after != before) << row.from << " -> " << row.to;
    }
}

TEST(Tilt, FortyFiveToTwentyEightStaysClosedSilently) {
    auto sw = set_tilt(door(), 45.0, ms(0))->sw;
    auto r = set_tilt(sw, 28.0, ms(5000));
    EXPECT_TRUE(r->sw.closed);
    EXPECT_FALSE(r->event);
}

TEST(Tilt, DebounceSuppressesQuickSecondCrossing) {
    auto first = set_tilt(door(), 45.0, ms(0));
    ASSERT_TRUE(first->event);
    auto second = set_tilt(first->sw, 0.0, ms(100));
    EXPECT_FALSE(second->event);
    EXPECT_TRUE(second->sw.closed);
    EXPECT_FALSE(second->sw.contact);
    // Once the window has passed the next sample reports the open state.
    auto third = set_tilt(second->sw, 0.0, ms(200));
    ASSERT_TRUE(third->event);
    EXPECT_FALSE(third->event->closed);
}

TEST(Tilt, OutOfRange) {
    EXPECT_EQ(set_tilt(door(), -1.0, ms(0)).error().code, VehicleError::TiltOutOfRange);
    EXPECT_EQ(set_tilt(door(), 180.5, ms(0)).error().code, VehicleError::TiltOutOfRange);
    EXPECT_EQ(set_tilt(door(), std::nan(""), ms(0)).error().code, VehicleError::TiltOutOfRange);
    EXPECT_TRUE(set_tilt(door(), 180.0, ms(0)));
}

TEST(Tilt, DebouncePropertyOverRandomTrajectories) {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> tilt(0.0, 60.0);
    for (int trial = 0; trial < 300; ++trial) {
        auto sw = door();
        std::int64_t t = 0;
        std::optional<VirtualTime> last;
        bool reported = false;
        for (int step = 0; step < 100; ++step) {
            t += static_cast<std::int64_t>(rng() % 400);
            auto r = set_tilt(sw, tilt(rng), ms(t));
            ASSERT_TRUE(r);
            sw = r->sw;
            if (r->event) {
                if (last) EXPECT_GE((r->event->at - *last).millis(), 200);
                EXPECT_NE(r->event->closed, reported);  // events alternate
                reported = r->event->closed;
                last = r->event->at;
            }
            EXPECT_EQ(sw.closed, reported);
        }
    }
}

TEST(Relay, LockOnFreshBank) {
    auto bank = apply_relay({}, RelayAction::Lock);
    EXPECT_TRUE(bank.gear_lock);
    EXPECT_FALSE(bank.engine_seize);
    EXPECT_FALSE(bank.supply_cut);
    EXPECT_EQ(describe(bank), "gear_lock=on engine_seize=off supply_cut=off");
}

TEST(Relay, IdempotentAndIndependent) {
    auto once = apply_relay({}, RelayAction::Lock);
    EXPECT_EQ(apply_relay(once, RelayAction::Lock), once);
    auto both = apply_relay(once, RelayAction::Seize);
    EXPECT_TRUE(both.gear_lock);
    EXPECT_TRUE(both.engine_seize);
    EXPECT_FALSE(both.supply_cut);
}

TEST(Relay, MonotoneLatch) {
    std::mt19937 rng(43);
    const RelayAction actions[] = {RelayAction::Lock, RelayAction::Seize, RelayAction::Cut};
    for (int trial = 0; trial < 200; ++trial) {
        RelayBank bank;
        for (int step = 0; step < 10; ++step) {
            const auto next = apply_relay(bank, actions[rng() % 3]);
            EXPECT_TRUE(!bank.gear_lock || next.gear_lock);
            EXPECT_TRUE(!bank.engine_seize || next.engine_seize);
            EXPECT_TRUE(!bank.supply_cut || next.supply_cut);
            bank = next;
        }
    }
}

std::vector<nmea::GpsFix> decode_all(const std::vector<std::string>& lines) {
    std::vector<nmea::GpsFix> out;
    for (const auto& line : lines) {
        auto fix = nmea::decode_line(line);
        EXPECT_TRUE(fix) << line;
        if (fix && fix->has_value()) out.push_back(**fix);
    }
    return out;
}

TEST(Gps, SingleWaypointIsConstant) {
    GpsSource src({Waypoint{VirtualTime{}, 24.8607, 67.0011, true}});
    for (int s : {0, 1, 7, 3600}) {
        auto lines = src.emit(VirtualTime::from_seconds(s));
        ASSERT_TRUE(lines);
        ASSERT_EQ(lines->size(), 2u);
        EXPECT_TRUE((*lines)[0].starts_with("$GPRMC,"));
        EXPECT_TRUE((*lines)[1].starts_with("$GPGGA,"));
        for (const auto& fix : decode_all(*lines)) {
            EXPECT_TRUE(fix.valid);
            EXPECT_NEAR(fix.latitude, 24.8607, 1e-6);
            EXPECT_NEAR(fix.longitude, 67.0011, 1e-6);
        }
    }
}

TEST(Gps, FirstSentenceBytes) {
    // Checksum 0x36 computed separately (XOR of the payload bytes).
    GpsSource src({Waypoint{VirtualTime{}, 24.8607, 67.0011, true}});
    EXPECT_EQ(src.emit(VirtualTime{})->at(0), "$GPRMC,000000.00,A,2451.6420,N,06700.0660,E,0.0,0.0,010124,,*36\r\n");
}

TEST(Gps, InterpolatesBetweenWaypoints) {
    GpsSource src({Waypoint{VirtualTime{}, 0.0, 0.0, true}, Waypoint{VirtualTime::from_seconds(10), 0.0, 0.001, true}});
    auto s = src.sample(VirtualTime::from_seconds(5));
    ASSERT_TRUE(s);
    EXPECT_NEAR(s->longitude, 0.0005, 1e-12);
    EXPECT_NEAR(s->latitude, 0.0, 1e-12);
    auto fixes = decode_all(*src.emit(VirtualTime::from_seconds(5)));
    ASSERT_EQ(fixes.size(), 2u);
    EXPECT_NEAR(fixes[0].longitude, 0.0005, 1e-6);
}

TEST(Gps, ClampsOutsideTrack) {
    GpsSource src({Waypoint{VirtualTime::from_seconds(10), 1.0, 2.0, true},
                   Waypoint{VirtualTime::from_seconds(20), 3.0, 4.0, true}});
    EXPECT_DOUBLE_EQ(src.sample(VirtualTime{})->latitude, 1.0);
    EXPECT_DOUBLE_EQ(src.sample(VirtualTime::from_seconds(99))->longitude, 4.0);
}

TEST(Gps, InvalidSegmentEmitsVoidStatus) {
    GpsSource src({Waypoint{VirtualTime{}, 10.0, 10.0, false}, Waypoint{VirtualTime::from_seconds(10), 11.0, 11.0, true}});
    auto lines = src.emit(VirtualTime::from_seconds(3));
    ASSERT_TRUE(lines);
    auto rmc = nmea::parse_sentence((*lines)[0]);
    ASSERT_TRUE(rmc);
    EXPECT_EQ(rmc->fields[1], "V");
    for (const auto& fix : decode_all(*lines)) EXPECT_FALSE(fix.valid);
    for (const auto& fix : decode_all(*src.emit(VirtualTime::from_seconds(10)))) EXPECT_TRUE(fix.valid);
}

TEST(Gps, EmitUsesWholeSecond) {
    GpsSource src({Waypoint{VirtualTime{}, 0.0, 0.0, true}, Waypoint{VirtualTime::from_seconds(10), 0.0, 0.001, true}});
    EXPECT_EQ(*src.emit(VirtualTime::from_millis(5999)), *src.emit(VirtualTime::from_seconds(5)));
}

TEST(Gps, EmptyTrack) {
    GpsSource src;
    EXPECT_EQ(src.emit(VirtualTime{}).error().code, VehicleError::EmptyTrack);
    EXPECT_EQ(src.sample(VirtualTime{}).error().code, VehicleError::EmptyTrack);
}

TEST(Gps, FuzzedTracksAlwaysParse) {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> lat(-90.0, 90.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    int parsed = 0;
    for (int trial = 0; trial < 100; ++trial) {
        GpsSource src;
        const int n = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < n; ++i) {
            src.add(Waypoint{VirtualTime::from_seconds(static_cast<std::int64_t>(rng() % 120)), lat(rng), lon(rng),
                             rng() % 4 != 0});
        }
        for (int s = 0; s < 130; s += 7) {
            auto lines = src.emit(VirtualTime::from_seconds(s));
            ASSERT_TRUE(lines);
            for (const auto& line : *lines) {
                auto sentence = nmea::parse_sentence(line);
                ASSERT_TRUE(sentence) << line;
                auto fix = nmea::decode_line(line);
                ASSERT_TRUE(fix) << line << fix.error().message;
                ASSERT_TRUE(fix->has_value());
                auto expect = src.sample(VirtualTime::from_seconds(s));
                EXPECT_EQ((*fix)->valid, expect->valid);
                if (expect->valid) {
                    EXPECT_NEAR((*fix)->latitude, expect->latitude, 1e-6);
                    EXPECT_NEAR((*fix)->longitude, expect->longitude, 1e-6);
                }
                ++parsed;
            }
        }
    }
    EXPECT_GT(parsed, 0);
}

TEST(Kinds, ParseCaseInsensitive) {
    EXPECT_EQ(parse_intrusion_kind("door"), IntrusionKind::Door);
    EXPECT_EQ(parse_intrusion_kind("BONNET"), IntrusionKind::Bonnet);
    EXPECT_EQ(parse_intrusion_kind("Trunk"), IntrusionKind::Trunk);
    EXPECT_FALSE(parse_intrusion_kind("window"));
}

}  // namespace
}  // namespace carguard
