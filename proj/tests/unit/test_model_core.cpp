#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "gyrocopter/angles.hpp"
#include "gyrocopter/errors.hpp"
#include "gyrocopter/gain_pattern.hpp"
#include "gyrocopter/geometry.hpp"
#include "gyrocopter/rng.hpp"

using namespace gyro;

TEST(RelativeBearing, SpecExamples) {
    const UavState origin(Vec3::Zero(), 0.0);
    EXPECT_NEAR(relative_bearing(SourceState(10, 0), origin), kPi / 2, 1e-12);
    EXPECT_NEAR(relative_bearing(SourceState(0, 10), UavState(Vec3::Zero(), kPi / 2)), 3 * kPi / 2, 1e-12);
    // atan2(3, 4) - 0.2 = 0.643501108793284... - 0.2
    EXPECT_NEAR(relative_bearing(SourceState(3, 4), UavState(Vec3::Zero(), 0.2)), 0.4435011087932844, 1e-12);
}

TEST(RelativeBearing, CoincidentPositionsThrow) {
    EXPECT_THROW(relative_bearing(SourceState(1, 2, 0), UavState(Vec3(1, 2, 50), 0.0)), GeometryError);
}

TEST(RelativeBearing, TranslationAndHeadingProperties) {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 s(rng.uniform(-500, 500), rng.uniform(-500, 500));
        const UavState u(Vec3(rng.uniform(-500, 500), rng.uniform(-500, 500), 60), rng.uniform(0, kTwoPi));
        const Vec2 shift(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3));
        const double phi = relative_bearing(s, u);
        ASSERT_GE(phi, 0.0);
        ASSERT_LT(phi, kTwoPi);
        const UavState moved(u.position() + Vec3(shift.x(), shift.y(), 0), u.heading());
        EXPECT_NEAR(wrap_pi(relative_bearing(Vec2(s + shift), moved) - phi), 0.0, 1e-9);
        const double delta = rng.uniform(-10, 10);
        const UavState turned(u.position(), wrap_two_pi(u.heading() + delta));
        EXPECT_NEAR(wrap_pi(relative_bearing(s, turned) - wrap_two_pi(phi - delta)), 0.0, 1e-9);
    }
}

TEST(Angles, WrapRanges) {
    EXPECT_EQ(wrap_two_pi(0.0), 0.0);
    EXPECT_NEAR(wrap_two_pi(-0.5), kTwoPi - 0.5, 1e-15);
    EXPECT_LT(wrap_two_pi(-1e-18), kTwoPi);
    EXPECT_NEAR(wrap_pi(3 * kPi / 2), -kPi / 2, 1e-15);
    EXPECT_NEAR(wrap_pi(kPi), kPi, 1e-15);
}

TEST(GainPattern, ParametricExamples) {
    const auto p = GainPattern::parametric(6.15, 10);
    EXPECT_DOUBLE_EQ(gain_db(p, 0.0), 6.15);
    EXPECT_NEAR(gain_db(p, kPi), -3.85, 1e-12);
    EXPECT_NEAR(gain_slope_db_per_rad(p, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(gain_slope_db_per_rad(p, kPi / 2), -5.0, 1e-12);
    const double h = 1e-5;
    const double fd = (gain_db(p, 2.0 + h) - gain_db(p, 2.0 - h)) / (2 * h);
    EXPECT_NEAR(gain_slope_db_per_rad(p, 2.0), fd, 1e-6 * std::abs(fd));
}

TEST(GainPattern, TabulatedInterpolationWraps) {
    const auto p = GainPattern::tabulated({{0, 6}, {kPi / 2, 2}, {kPi, -4}, {3 * kPi / 2, 2}});
    EXPECT_NEAR(gain_db(p, kPi / 4), 4.0, 1e-12);
    // between 3pi/2 and 2pi the table wraps back to the 0 sample
    EXPECT_NEAR(gain_db(p, 7 * kPi / 4), 4.0, 1e-12);
    EXPECT_NEAR(gain_db(p, -kPi / 4), 4.0, 1e-12);
}

TEST(GainPattern, TabulatedRejectsBadTables) {
    EXPECT_THROW(GainPattern::tabulated({{0.1, 1}, {1, 0}}), std::exception);
    EXPECT_THROW(GainPattern::tabulated({{0, 1}, {1, 0}, {1, 2}}), std::exception);
    EXPECT_THROW(GainPattern::tabulated({{0, 1}, {kTwoPi, 0}}), std::exception);
}

TEST(GainPattern, Periodicity) {
    const auto par = GainPattern::parametric(6.15, 10);
    const auto tab = GainPattern::h_antenna();
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double phi = rng.uniform(-20, 20);
        const int k = static_cast<int>(rng.uniform(-5, 5));
        EXPECT_NEAR(gain_db(par, phi), gain_db(par, phi + kTwoPi * k), 1e-12);
        EXPECT_NEAR(gain_db(tab, phi), gain_db(tab, phi + kTwoPi * k), 1e-9);
    }
}

TEST(GainPattern, SlopeMatchesFiniteDifferences) {
    const auto p = GainPattern::parametric(6.15, 10);
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double phi = rng.uniform(0, kTwoPi);
        const double h = 1e-6;
        const double fd = (gain_db(p, phi + h) - gain_db(p, phi - h)) / (2 * h);
        const double an = gain_slope_db_per_rad(p, phi);
        EXPECT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(an)));
    }
}

TEST(GainPattern, HAntennaPublishedFacts) {
    const auto p = GainPattern::h_antenna();
    EXPECT_NEAR(gain_db(p, 0.0), 6.15, 1e-12);
    EXPECT_NEAR(gain_db(p, 0.0) - gain_db(p, kPi), 10.0, 1e-9);
    for (double deg = 0; deg < 360; deg += 1) EXPECT_LE(gain_db(p, deg2rad(deg)), 6.15 + 1e-12);
    EXPECT_GE(gain_db(p, kPi / 2), 6.15 - 20.0 - 1e-9);
}

TEST(GainPattern, CsvRoundTrip) {
    const auto p = GainPattern::h_antenna();
    std::stringstream ss;
    p.write_csv(ss);
    const auto q = GainPattern::parse_csv(ss);
    for (double deg = 0; deg < 360; deg += 2.5) EXPECT_NEAR(gain_db(p, deg2rad(deg)), gain_db(q, deg2rad(deg)), 1e-9);
}

TEST(GainPattern, CsvErrorsNameTheLine) {
    std::istringstream missing_header("0,1\n90,0\n");
    EXPECT_THROW(GainPattern::parse_csv(missing_header), ConfigError);
    std::istringstream bad("angle_deg,gain_db\n0,1\n90,x\n");
    try {
        GainPattern::parse_csv(bad, "ant.csv");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("ant.csv"), std::string::npos);
    }
}

TEST(Rng, DeriveSeedSeparatesStreams) {
    EXPECT_EQ(derive_seed(1, "noise"), derive_seed(1, "noise"));
    EXPECT_NE(derive_seed(1, "noise"), derive_seed(1, "filter"));
    EXPECT_NE(derive_seed(1, "run", 0, 1), derive_seed(1, "run", 1, 0));
    EXPECT_NE(derive_seed(1, "noise"), derive_seed(2, "noise"));
    Rng a(derive_seed(5, "x")), b(derive_seed(5, "x"));
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.normal(), b.normal());
}
