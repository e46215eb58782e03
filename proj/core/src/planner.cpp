#include "gyrocopter/planner.hpp"

#include <cmath>
#include <limits>

#include "gyrocopter/errors.hpp"

namespace gyro {

namespace {

constexpr double kHoverRadius = 1.0;  // m
constexpr double kTieTolerance = 1e-9;

}  // namespace

void PlannerConfig::validate() const {
    if (!(uav_speed > 0.0)) throw DomainError("uav_speed must be > 0");
    if (discrete_heading_count < 2) throw DomainError("discrete_heading_count must be >= 2");
    if (!(discrete_action_duration > 0.0) || !(replan_period_continuous > 0.0))
        throw DomainError("planner durations must be > 0");
    if (!std::isfinite(gyration_rate)) throw DomainError("gyration_rate must be finite");
}

std::optional<int> select_nearest_source(std::span<const ParticleBelief> beliefs, const UavState& uav) {
    std::optional<int> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& b : beliefs) {
        if (b.localized) continue;
        const double d = (estimate_mean(b) - uav.horizontal()).norm();
        if (d < best_d || (d == best_d && best && b.source_id < *best)) {
            best_d = d;
            best = b.source_id;
        }
    }
    return best;
}

Vec2 predicted_mean(const ParticleBelief& belief, const TransitionModel&, double) { return estimate_mean(belief); }

Action plan_discrete(const UavState& uav, const ParticleBelief& target, const PlannerConfig& config,
                     const TransitionModel& transition, const std::optional<Bounds>& bounds) {
    const Vec2 goal = predicted_mean(target, transition, config.discrete_action_duration);
    const double reach = config.uav_speed * config.discrete_action_duration;
    Action best{Vec2::Zero(), config.discrete_action_duration};
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < config.discrete_heading_count; ++k) {
        const double heading = kTwoPi * k / config.discrete_heading_count;
        const Vec2 dir(std::sin(heading), std::cos(heading));
        Vec2 end = uav.horizontal() + reach * dir;
        if (bounds) end = bounds->clamp(end);
        const double d = (end - goal).norm();
        if (k == 0 || d < best_d - kTieTolerance * std::max(1.0, best_d)) {
            best_d = d;
            best.velocity = config.uav_speed * dir;
        }
    }
    return best;
}

Action plan_continuous(const UavState& uav, const ParticleBelief& target, const PlannerConfig& config,
                       const TransitionModel& transition) {
    const Vec2 goal = predicted_mean(target, transition, config.replan_period_continuous);
    const Vec2 to_goal = goal - uav.horizontal();
    const double dist = to_goal.norm();
    if (dist < kHoverRadius) return {Vec2::Zero(), config.replan_period_continuous};
    return {config.uav_speed * to_goal / dist, config.replan_period_continuous};
}

Action plan(const UavState& uav, const ParticleBelief& target, const PlannerConfig& config,
            const TransitionModel& transition, const std::optional<Bounds>& bounds) {
    return config.mode == PlannerMode::Discretized ? plan_discrete(uav, target, config, transition, bounds)
                                                   : plan_continuous(uav, target, config, transition);
}

UavState propagate_uav(const UavState& uav, const Action& action, double gyration_rate, double dt) {
    if (!(dt > 0.0)) throw DomainError("propagation step must be > 0");
    Vec3 p = uav.position();
    p.head<2>() += action.velocity * dt;
    return UavState(p, uav.heading() + gyration_rate * dt);
}

}  // namespace gyro
