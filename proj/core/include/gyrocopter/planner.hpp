#pragma once

#include <optional>
#include <span>

#include "gyrocopter/geometry.hpp"
#include "gyrocopter/particle_filter.hpp"

namespace gyro {

enum class PlannerMode { Discretized, Continuous };

struct PlannerConfig {
    PlannerMode mode = PlannerMode::Continuous;
    double uav_speed = 10.0;                ///< m/s
    double discrete_action_duration = 8.0;  ///< s
    int discrete_heading_count = 8;
    double replan_period_continuous = 1.0;  ///< s
    double gyration_rate = deg2rad(40.0);   ///< rad/s

    void validate() const;
    double replan_period() const {
        return mode == PlannerMode::Discretized ? discrete_action_duration : replan_period_continuous;
    }
};

/// Constant velocity held for `duration`.
struct Action {
    Vec2 velocity = Vec2::Zero();  ///< m/s
    double duration = 1.0;         ///< s

    bool is_hover() const { return velocity.isZero(0.0); }
};

/// Nearest unlocalized source by estimated mean; ties go to the lower id. nullopt when
/// every source is localized (mission complete).
std::optional<int> select_nearest_source(std::span<const ParticleBelief> beliefs, const UavState& uav);

/// Belief mean after the random walk over the planning horizon. The walk is zero-mean, so
/// this is the current mean.
Vec2 predicted_mean(const ParticleBelief& belief, const TransitionModel& transition, double horizon);

/// Best of `discrete_heading_count` headings (clockwise from north) flown for the action
/// duration: minimum endpoint distance to the predicted mean, ties to the smaller heading.
/// With `bounds`, endpoints are projected into the rectangle before scoring.
Action plan_discrete(const UavState& uav, const ParticleBelief& target, const PlannerConfig& config,
                     const TransitionModel& transition, const std::optional<Bounds>& bounds = std::nullopt);

/// Full speed straight at the predicted mean; hover when closer than 1 m.
Action plan_continuous(const UavState& uav, const ParticleBelief& target, const PlannerConfig& config,
                       const TransitionModel& transition);

Action plan(const UavState& uav, const ParticleBelief& target, const PlannerConfig& config,
            const TransitionModel& transition, const std::optional<Bounds>& bounds = std::nullopt);

/// Translate at the action velocity and spin at `gyration_rate` for `dt`; altitude fixed.
UavState propagate_uav(const UavState& uav, const Action& action, double gyration_rate, double dt);

}  // namespace gyro
