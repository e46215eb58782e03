#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "gyrocopter/angles.hpp"
#include "gyrocopter/errors.hpp"
#include "gyrocopter/mission.hpp"
#include "gyrocopter/monte_carlo.hpp"

using namespace gyro;

namespace {

ScenarioConfig single_static_source() {
    ScenarioConfig c = convergence_preset();
    c.mission_timeout = 300;
    return c;
}

ScenarioConfig small_default(Method m) {
    ScenarioConfig c = default_scenario();
    c.method = m;
    c.filter.n_particles = 500;
    c.mission_timeout = 200;
    return c;
}

}  // namespace

TEST(GroundTruth, StationaryWithoutProcessNoise) {
    ScenarioConfig c = default_scenario();
    c.source_sigma_q = 0.0;
    c.mission_timeout = 50;
    Rng rng(1);
    const auto truth = generate_ground_truth(c, rng);
    ASSERT_EQ(truth.size(), c.sources.size());
    for (const auto& series : truth)
        for (const auto& p : series) EXPECT_EQ(p.head<2>(), series.front().head<2>());
}

TEST(GroundTruth, StepStatisticsAndDeterminism) {
    ScenarioConfig c = convergence_preset();
    c.bounds = Bounds{-1e7, -1e7, 1e7, 1e7};
    c.sources = {{0, Vec2(0, 0)}};
    c.source_sigma_q = 2.0;
    c.mission_timeout = 100000;
    Rng a(5), b(5);
    const auto ta = generate_ground_truth(c, a);
    const auto tb = generate_ground_truth(c, b);
    EXPECT_EQ(ta, tb);
    double s2 = 0;
    const auto& s = ta[0];
    for (std::size_t k = 1; k < s.size(); ++k) s2 += (s[k] - s[k - 1]).head<2>().squaredNorm();
    EXPECT_NEAR(std::sqrt(s2 / (2.0 * static_cast<double>(s.size() - 1))), 2.0, 0.04);
}

TEST(GroundTruth, ReflectsInsideBoundsAndFollowsTerrain) {
    ScenarioConfig c = default_scenario();
    c.source_sigma_q = 30.0;
    c.mission_timeout = 500;
    Rng rng(2);
    const auto truth = generate_ground_truth(c, rng);
    const auto grid = c.terrain_grid();
    for (const auto& series : truth)
        for (const auto& p : series) {
            ASSERT_TRUE(c.bounds.contains(p.head<2>()));
            EXPECT_NEAR(p.z(), grid->height_clamped(p.head<2>()) + c.source_height, 1e-9);
        }
}

TEST(RotateBearing, NoiselessIsExact) {
    Rng rng(3);
    const UavState u(Vec3(0, 0, 60), 2.0);
    EXPECT_NEAR(rotate_bearing_measure(u, Vec3(100, 100, 1), 0.0, rng), kPi / 4, 1e-12);
}

TEST(RotateBearing, LikelihoodFloorsAtOppositeBearing) {
    const UavState u(Vec3(0, 0, 60), 0.0);
    EXPECT_EQ(bearing_log_likelihood(kPi, u, Vec2(0, 100), deg2rad(9)), kLogLikelihoodFloor);
    EXPECT_GT(bearing_log_likelihood(0.01, u, Vec2(0, 100), deg2rad(9)), kLogLikelihoodFloor);
    // wrapped residual: 359 deg vs 1 deg is a 2 deg miss
    EXPECT_NEAR(bearing_log_likelihood(deg2rad(359), u, Vec2(std::sin(deg2rad(1)), std::cos(deg2rad(1))), deg2rad(9)),
                bearing_log_likelihood(deg2rad(3), u, Vec2(std::sin(deg2rad(1)), std::cos(deg2rad(1))), deg2rad(9)),
                1e-9);
}

TEST(RotateBearing, ScheduleCadence) {
    RotateBearingConfig cfg;
    RotateBearingSchedule s(cfg);
    std::vector<double> bearings;
    for (int t = 1; t <= 200; ++t)
        if (s.advance(1.0)) bearings.push_back(t);
    ASSERT_GE(bearings.size(), 2u);
    for (std::size_t i = 1; i < bearings.size(); ++i)
        EXPECT_GE(bearings[i] - bearings[i - 1], cfg.rotation_time);
    EXPECT_EQ(bearings.front(), cfg.rotation_time);
}

TEST(RotateBearing, MissionHasStationaryRotations) {
    ScenarioConfig c = small_default(Method::RotateBearing);
    const auto r = run_mission(c, 4);
    int longest = 0, run = 0;
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
        const bool still = (r.trajectory[i].second.position() - r.trajectory[i - 1].second.position()).norm() < 1e-9;
        run = still ? run + 1 : 0;
        longest = std::max(longest, run);
    }
    EXPECT_GE(longest, 10);
}

TEST(RssiIdeal, MaximumAtTruthAndNotOffsetInvariant) {
    const RadioModel truth;
    const auto p = GainPattern::h_antenna();
    EnvironmentModel env;
    const UavState u(Vec3(0, 0, 60), 0.7);
    const Vec3 src(200, 150, 1);
    const double z = mean_rssi(truth, p, SourceState(src), u);
    const double at_truth = rssi_ideal_log_likelihood(z, truth, p, env, u, src, 2.0);
    for (const Vec3 off : {Vec3(20, 0, 0), Vec3(0, -30, 0), Vec3(-50, 50, 0)})
        EXPECT_LT(rssi_ideal_log_likelihood(z, truth, p, env, u, src + off, 2.0), at_truth);
    EXPECT_LT(rssi_ideal_log_likelihood(z + 10.0, truth, p, env, u, src, 2.0), at_truth - 1.0);
}

TEST(DualAntenna, BoresightNoiseless) {
    Rng rng(6);
    const auto p = GainPattern::h_antenna();
    const UavState u(Vec3(0, 0, 60), 0.0);
    EXPECT_NEAR(dual_antenna_measure(p, 1.5, u, Vec3(0, 300, 1), 0.0, rng), 6.15 + 1.5, 1e-12);
}

TEST(DualAntenna, LikelihoodUsesDoubleVariance) {
    const auto p = GainPattern::h_antenna();
    const UavState u(Vec3(0, 0, 60), 0.0);
    const double g = gain_db(p, 0.0);
    const double ll0 = dual_antenna_log_likelihood(g, p, 0.0, u, Vec2(0, 300), 2.0);
    const double ll1 = dual_antenna_log_likelihood(g + 1.0, p, 0.0, u, Vec2(0, 300), 2.0);
    EXPECT_NEAR(ll0 - ll1, 0.5 / 8.0, 1e-12);
}

TEST(Mission, ZeroSourcesCompletesImmediately) {
    ScenarioConfig c = default_scenario();
    c.sources.clear();
    const auto r = run_mission(c, 1);
    EXPECT_EQ(r.total_time, 0.0);
    EXPECT_TRUE(r.per_source.empty());
    EXPECT_TRUE(r.all_localized());
}

TEST(Mission, SmokeSingleStaticSource) {
    // regression baseline: seed 1 localizes in about a minute
    const auto r = run_mission(single_static_source(), 1);
    ASSERT_EQ(r.per_source.size(), 1u);
    ASSERT_TRUE(r.per_source[0].localization_time.has_value());
    EXPECT_LT(*r.per_source[0].localization_time, 300.0);
    EXPECT_LT(*r.per_source[0].error, 40.0);
}

TEST(Mission, Deterministic) {
    for (Method m : {Method::Gyro, Method::DualAntenna, Method::RotateBearing, Method::RssiIdeal}) {
        const auto c = small_default(m);
        const auto a = run_mission(c, 11);
        const auto b = run_mission(c, 11);
        EXPECT_EQ(a.summary_json().dump(), b.summary_json().dump()) << to_string(m);
        ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
        for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
            ASSERT_EQ(a.trajectory[i].second.position(), b.trajectory[i].second.position());
            ASSERT_EQ(a.trajectory[i].second.heading(), b.trajectory[i].second.heading());
        }
    }
}

TEST(Mission, ResultInvariants) {
    ScenarioConfig c = small_default(Method::Gyro);
    c.detection_prob = 0.7;
    const auto r = run_mission(c, 12);
    EXPECT_EQ(r.per_source.size(), c.sources.size());
    EXPECT_EQ(r.belief_det_trace.size(), c.sources.size());
    EXPECT_GE(r.detection_rate, 0.0);
    EXPECT_LE(r.detection_rate, 1.0);
    EXPECT_EQ(r.detection_rate, static_cast<double>(r.detections) / static_cast<double>(r.pulses));
    EXPECT_NEAR(r.detection_rate, 0.7, 0.05);
    for (const auto& s : r.per_source) EXPECT_EQ(s.localization_time.has_value(), s.error.has_value());
    for (const auto& [t, u] : r.trajectory) EXPECT_EQ(u.position().z(), c.altitude);
}

TEST(Mission, TimeoutIsReportedNotThrown) {
    ScenarioConfig c = small_default(Method::Gyro);
    c.mission_timeout = 5;
    const auto r = run_mission(c, 13);
    EXPECT_EQ(r.timeouts(), static_cast<int>(c.sources.size()));
    EXPECT_TRUE(std::isnan(r.mean_error()));
    EXPECT_EQ(r.total_time, 5.0);
}

TEST(Convergence, SameInitialDetAndFixedPath) {
    const auto tr = rotation_speed_convergence(convergence_preset(), {0, 20, 40}, 3);
    ASSERT_EQ(tr.size(), 3u);
    for (const auto& t : tr) {
        ASSERT_FALSE(t.trace.empty());
        EXPECT_EQ(t.trace.front().det, tr[0].trace.front().det);
    }
    EXPECT_EQ(tr[0].zeta_deg_s, 0.0);
    EXPECT_FALSE(tr[0].time_to_threshold.has_value());
}

TEST(MonteCarlo, SingleRunEqualsMission) {
    ScenarioConfig c = small_default(Method::Gyro);
    const auto mc = run_monte_carlo(c, 1, 1, 21);
    ASSERT_EQ(mc.runs.size(), 1u);
    std::vector<SourceSpec> sources;
    const auto truth = track_ground_truth(c, 21, 0, &sources);
    ScenarioConfig run_cfg = c;
    run_cfg.sources = sources;
    const auto r = run_mission(run_cfg, truth, mc.runs[0].seed);
    EXPECT_EQ(mc.summary.total_time.mean, r.total_time);
    EXPECT_EQ(mc.runs[0].timeouts, r.timeouts());
    EXPECT_EQ(mc.summary.detection_rate, r.detection_rate);
    if (!std::isnan(r.mean_error())) EXPECT_EQ(mc.summary.mean_error.mean, r.mean_error());
}

TEST(MonteCarlo, SummaryMatchesReaggregation) {
    ScenarioConfig c = small_default(Method::DualAntenna);
    const auto mc = run_monte_carlo(c, 2, 3, 22);
    ASSERT_EQ(mc.runs.size(), 6u);
    double t = 0, e = 0, d = 0;
    int ne = 0, to = 0;
    for (const auto& r : mc.runs) {
        t += r.total_time;
        d += r.detection_rate;
        to += r.timeouts;
        if (!std::isnan(r.mean_error)) {
            e += r.mean_error;
            ++ne;
        }
    }
    EXPECT_DOUBLE_EQ(mc.summary.total_time.mean, t / 6);
    EXPECT_DOUBLE_EQ(mc.summary.detection_rate, d / 6);
    EXPECT_DOUBLE_EQ(mc.summary.timeout_rate, to / (6.0 * static_cast<double>(c.sources.size())));
    if (ne > 0) EXPECT_DOUBLE_EQ(mc.summary.mean_error.mean, e / ne);
}

TEST(MonteCarlo, JobsDoNotChangeResults) {
    ScenarioConfig c = small_default(Method::Gyro);
    const auto a = run_monte_carlo(c, 2, 2, 23, 1);
    const auto b = run_monte_carlo(c, 2, 2, 23, 3);
    ASSERT_EQ(a.runs.size(), b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        EXPECT_EQ(a.runs[i].seed, b.runs[i].seed);
        EXPECT_EQ(a.runs[i].total_time, b.runs[i].total_time);
        EXPECT_EQ(std::isnan(a.runs[i].mean_error), std::isnan(b.runs[i].mean_error));
        if (!std::isnan(a.runs[i].mean_error)) EXPECT_EQ(a.runs[i].mean_error, b.runs[i].mean_error);
    }
}

TEST(MonteCarlo, DistinctRunSeeds) {
    ScenarioConfig c = small_default(Method::Gyro);
    c.mission_timeout = 3;
    const auto mc = run_monte_carlo(c, 3, 3, 24);
    for (std::size_t i = 0; i < mc.runs.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) EXPECT_NE(mc.runs[i].seed, mc.runs[j].seed);
    EXPECT_THROW(run_monte_carlo(c, 0, 1, 1), ConfigError);
}

TEST(MonteCarlo, SourceMobilityHelper) {
    const auto c = with_source_mobility(default_scenario(), 0.0);
    EXPECT_EQ(c.source_sigma_q, 0.0);
    EXPECT_EQ(c.filter.sigma_q, 1.0);
    EXPECT_EQ(with_source_mobility(default_scenario(), 4.0).filter.sigma_q, 4.0);
}

TEST(Scenario, JsonRoundTrip) {
    for (const char* name : {"default", "field", "convergence"}) {
        const auto c = preset(name);
        const auto j = scenario_to_json(c);
        EXPECT_EQ(scenario_to_json(scenario_from_json(j)).dump(), j.dump()) << name;
    }
}

TEST(Scenario, PartialJsonKeepsDefaults) {
    const auto c = scenario_from_json(nlohmann::json::parse(R"({"method": "rotate_bearing"})"));
    EXPECT_EQ(c.method, Method::RotateBearing);
    EXPECT_EQ(c.sources.size(), default_scenario().sources.size());
}

TEST(Scenario, ErrorsNameTheField) {
    try {
        scenario_from_json(nlohmann::json::parse(R"({"bogus_key": 1})"));
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("bogus_key"), std::string::npos);
    }
    ScenarioConfig c = default_scenario();
    c.window_m = 1;
    try {
        c.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "window_m");
    }
    EXPECT_THROW(parse_method("sonar"), ConfigError);
    EXPECT_THROW(preset("nope"), ConfigError);
}

TEST(Scenario, FieldPresetValues) {
    const auto c = field_preset();
    EXPECT_EQ(c.sources.size(), 4u);
    EXPECT_EQ(c.planner.uav_speed, 5.5);
    EXPECT_NEAR(c.planner.gyration_rate, deg2rad(40), 1e-12);
    EXPECT_EQ(c.truth_radio.noise_std, 5.0);
}
