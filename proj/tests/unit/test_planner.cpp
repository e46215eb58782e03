#include <cmath>

#include <gtest/gtest.h>

#include "gyrocopter/angles.hpp"
#include "gyrocopter/planner.hpp"
#include "gyrocopter/rng.hpp"

using namespace gyro;

namespace {

ParticleBelief point_belief(int id, const Vec2& at) {
    ParticleBelief b;
    b.source_id = id;
    b.particles = at;
    b.weights = Eigen::VectorXd::Ones(1);
    return b;
}

PlannerConfig discrete_config() {
    PlannerConfig c;
    c.mode = PlannerMode::Discretized;
    c.uav_speed = 10.0;
    return c;
}

}  // namespace

TEST(SelectNearest, SpecExamples) {
    const UavState u(Vec3::Zero(), 0);
    std::vector<ParticleBelief> b{point_belief(0, {120, 0}), point_belief(1, {0, 80}), point_belief(2, {300, 0})};
    EXPECT_EQ(select_nearest_source(b, u), 1);
    b[1].localized = true;
    EXPECT_EQ(select_nearest_source(b, u), 0);
    std::vector<ParticleBelief> tie{point_belief(3, {50, 0}), point_belief(1, {0, 50})};
    EXPECT_EQ(select_nearest_source(tie, u), 1);
    for (auto& x : b) x.localized = true;
    EXPECT_FALSE(select_nearest_source(b, u).has_value());
}

TEST(PlanDiscrete, NorthTarget) {
    const auto a = plan_discrete(UavState(Vec3::Zero(), 1.3), point_belief(0, {0, 500}), discrete_config(), {});
    EXPECT_NEAR(a.velocity.x(), 0.0, 1e-12);
    EXPECT_NEAR(a.velocity.y(), 10.0, 1e-12);
    EXPECT_EQ(a.duration, 8.0);
}

TEST(PlanDiscrete, TieGoesToSmallerHeading) {
    // due north-north-east at 22.5 deg sits between the 0 and 45 deg headings
    const double b = deg2rad(22.5);
    const auto a = plan_discrete(UavState(Vec3::Zero(), 0), point_belief(0, {500 * std::sin(b), 500 * std::cos(b)}),
                                 discrete_config(), {});
    EXPECT_NEAR(a.velocity.x(), 0.0, 1e-9);
    EXPECT_NEAR(a.velocity.y(), 10.0, 1e-9);
}

TEST(PlanDiscrete, MatchesBruteForce) {
    Rng rng(31);
    const auto cfg = discrete_config();
    for (int i = 0; i < 500; ++i) {
        const UavState u(Vec3(rng.uniform(0, 1000), rng.uniform(0, 1000), 60), rng.uniform(0, kTwoPi));
        const Vec2 goal(rng.uniform(0, 1000), rng.uniform(0, 1000));
        const auto a = plan_discrete(u, point_belief(0, goal), cfg, {});
        const double chosen = (u.horizontal() + a.velocity * a.duration - goal).norm();
        for (int k = 0; k < 8; ++k) {
            const double h = k * kTwoPi / 8;
            const Vec2 end = u.horizontal() + cfg.uav_speed * cfg.discrete_action_duration * Vec2(std::sin(h), std::cos(h));
            EXPECT_LE(chosen, (end - goal).norm() + 1e-9);
        }
        EXPECT_NEAR(a.velocity.norm(), cfg.uav_speed, 1e-9);
    }
}

TEST(PlanDiscrete, BoundsProjectEndpoints) {
    // against the east wall, heading east scores like staying put
    const Bounds b{0, 0, 100, 100};
    const auto a = plan_discrete(UavState(Vec3(100, 50, 60), 0), point_belief(0, {300, 50}), discrete_config(), {}, b);
    EXPECT_GE(a.velocity.x(), 0.0);
}

TEST(PlanContinuous, SpecExamples) {
    PlannerConfig c;
    c.uav_speed = 5.0;
    const auto a = plan_continuous(UavState(Vec3::Zero(), 0), point_belief(0, {30, 40}), c, {});
    EXPECT_NEAR(a.velocity.x(), 3.0, 1e-12);
    EXPECT_NEAR(a.velocity.y(), 4.0, 1e-12);
    EXPECT_EQ(a.duration, c.replan_period_continuous);
    EXPECT_TRUE(plan_continuous(UavState(Vec3(7, 7, 60), 0), point_belief(0, {7, 7}), c, {}).is_hover());
}

TEST(PlanContinuous, OptimalOverSampledActions) {
    Rng rng(32);
    PlannerConfig c;
    for (int i = 0; i < 20; ++i) {
        const UavState u(Vec3(rng.uniform(0, 1000), rng.uniform(0, 1000), 60), 0);
        const Vec2 goal(rng.uniform(0, 1000), rng.uniform(0, 1000));
        const auto a = plan_continuous(u, point_belief(0, goal), c, {});
        const double best = (u.horizontal() + a.velocity * a.duration - goal).norm();
        for (int k = 0; k < 10000; ++k) {
            const double h = rng.uniform(0, kTwoPi);
            const Vec2 end = u.horizontal() + c.uav_speed * a.duration * Vec2(std::sin(h), std::cos(h));
            ASSERT_LE(best, (end - goal).norm() + 1e-9);
        }
    }
}

TEST(PlanContinuous, StrictlyApproachesStaticMean) {
    PlannerConfig c;
    UavState u(Vec3(0, 0, 60), 0);
    const Vec2 goal(400, -250);
    double d = (u.horizontal() - goal).norm();
    while (d > c.uav_speed) {
        u = propagate_uav(u, plan_continuous(u, point_belief(0, goal), c, {}), c.gyration_rate, 1.0);
        const double nd = (u.horizontal() - goal).norm();
        ASSERT_LT(nd, d);
        d = nd;
    }
}

TEST(Planner, DependsOnlyOnMean) {
    Rng rng(33);
    ParticleBelief b;
    b.particles.resize(2, 50);
    b.weights.resize(50);
    for (int i = 0; i < 50; ++i) {
        b.particles.col(i) = Vec2(rng.uniform(0, 1000), rng.uniform(0, 1000));
        b.weights[i] = rng.uniform(0.1, 1);
    }
    b.weights /= b.weights.sum();
    ParticleBelief shuffled = b;
    for (int i = 0; i < 50; ++i) {
        shuffled.particles.col(i) = b.particles.col(49 - i);
        shuffled.weights[i] = b.weights[49 - i];
    }
    const UavState u(Vec3(10, 10, 60), 0);
    const auto cfg = discrete_config();
    EXPECT_TRUE(plan_discrete(u, b, cfg, {}).velocity.isApprox(plan_discrete(u, shuffled, cfg, {}).velocity));
    PlannerConfig cc;
    EXPECT_TRUE(plan_continuous(u, b, cc, {}).velocity.isApprox(plan_continuous(u, shuffled, cc, {}).velocity));
}

TEST(Propagate, SpecExamples) {
    const UavState u(Vec3(10, 20, 60), 1.0);
    const auto spun = propagate_uav(u, Action{Vec2::Zero(), 9.0}, deg2rad(40), 9.0);
    EXPECT_EQ(spun.position(), u.position());
    EXPECT_NEAR(wrap_pi(spun.heading() - u.heading()), 0.0, 1e-12);

    const auto moved = propagate_uav(u, Action{Vec2(5, 0), 8.0}, deg2rad(40), 8.0);
    EXPECT_NEAR(moved.position().x(), 50.0, 1e-12);
    EXPECT_NEAR(moved.position().y(), 20.0, 1e-12);
    EXPECT_EQ(moved.position().z(), 60.0);

    UavState stepped = u;
    for (int i = 0; i < 8; ++i) stepped = propagate_uav(stepped, Action{Vec2(5, -2), 8.0}, deg2rad(40), 1.0);
    EXPECT_LT((stepped.position() - moved.position() - Vec3(0, -16, 0)).norm(), 1e-9);
    EXPECT_NEAR(wrap_pi(stepped.heading() - moved.heading()), 0.0, 1e-9);
}

TEST(Propagate, HeadingStaysWrapped) {
    Rng rng(34);
    UavState u(Vec3::Zero(), 0);
    for (int i = 0; i < 1000; ++i) {
        u = propagate_uav(u, Action{Vec2(1, 1), 1}, rng.uniform(-10, 10), rng.uniform(0.01, 5));
        ASSERT_GE(u.heading(), 0.0);
        ASSERT_LT(u.heading(), kTwoPi);
    }
}

TEST(PlannerConfig, Validate) {
    PlannerConfig c;
    c.uav_speed = 0;
    EXPECT_THROW(c.validate(), std::exception);
    c = PlannerConfig{};
    c.discrete_heading_count = 1;
    EXPECT_THROW(c.validate(), std::exception);
}
