#include "gyrocopter/crlb.hpp"

#include <algorithm>
#include <thread>

#include "gyrocopter/errors.hpp"

namespace gyro {

namespace {

// relative tolerance below which J is treated as rank deficient
constexpr double kSingularRatio = 1e-12;

const Vec2 kOrigin = Vec2::Zero();

}  // namespace

void CrlbScenario::validate() const {
    if (!(radius > 0.0)) throw DomainError("radius must be > 0");
    if (!(sample_period > 0.0)) throw DomainError("sample_period must be > 0");
    if (!(sigma > 0.0)) throw DomainError("sigma must be > 0");
    if (steps < 1) throw DomainError("steps must be >= 1");
}

UavState uav_pose_at(const CrlbScenario& scenario, int step) {
    const double t = step * scenario.sample_period;
    const double orbit = scenario.revolve_rate * t;
    const Vec3 position(scenario.radius * std::sin(orbit), scenario.radius * std::cos(orbit), 0.0);
    const double initial_heading = world_bearing(Vec2(0.0, scenario.radius), kOrigin);
    return UavState(position, initial_heading + scenario.self_rotation * t);
}

Eigen::RowVector2d measurement_jacobian(const Vec2& source, const UavState& uav_prev, const UavState& uav_curr,
                                        const GainPattern& pattern) {
    const double phi_prev = relative_bearing(source, uav_prev);
    const double phi_curr = relative_bearing(source, uav_curr);
    const Vec2 row = pattern.slope_db_per_rad(phi_curr) * bearing_gradient(source, uav_curr) -
                     pattern.slope_db_per_rad(phi_prev) * bearing_gradient(source, uav_prev);
    return row.transpose();
}

FisherState fim_step(FisherState state, const Eigen::RowVector2d& h, double r_scalar) {
    if (!(r_scalar > 0.0)) throw DomainError("measurement variance must be > 0");
    state.information += h.transpose() * h / r_scalar;
    ++state.step;
    return state;
}

std::optional<double> crlb_det(const Eigen::Matrix2d& information) {
    const double trace = information.trace();
    const double det = information.determinant();
    if (!(trace > 0.0) || !(det > kSingularRatio * trace * trace)) return std::nullopt;
    return 1.0 / det;
}

namespace {

template <typename Visit>
FisherState run_differential(const CrlbScenario& scenario, int steps, Visit&& visit) {
    scenario.validate();
    const double r = 2.0 * scenario.sigma * scenario.sigma;
    FisherState state;
    UavState prev = uav_pose_at(scenario, 0);
    for (int k = 1; k <= steps; ++k) {
        const UavState curr = uav_pose_at(scenario, k);
        state = fim_step(state, measurement_jacobian(kOrigin, prev, curr, scenario.pattern), r);
        visit(state);
        prev = curr;
    }
    return state;
}

}  // namespace

std::vector<CrlbTracePoint> crlb_det_trace(const CrlbScenario& scenario) {
    std::vector<CrlbTracePoint> out;
    out.reserve(static_cast<std::size_t>(std::max(scenario.steps, 0)));
    run_differential(scenario, scenario.steps,
                     [&](const FisherState& s) { out.push_back({s.step, crlb_det(s.information)}); });
    return out;
}

FisherState differential_fim(const CrlbScenario& scenario) {
    return run_differential(scenario, scenario.steps, [](const FisherState&) {});
}

std::vector<SweepPoint> sweep_rotation(const CrlbScenario& scenario_template, const std::vector<double>& angles_deg,
                                       int steps, int jobs) {
    for (double a : angles_deg)
        if (!(a >= 0.0 && a <= 720.0)) throw DomainError("sweep angles must lie in [0, 720] degrees");
    std::vector<SweepPoint> out(angles_deg.size());
    auto run_one = [&](std::size_t i) {
        CrlbScenario s = scenario_template;
        s.self_rotation = deg2rad(angles_deg[i]) / s.sample_period;
        s.steps = steps;
        out[i] = {angles_deg[i], crlb_det(differential_fim(s).information)};
    };
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, out.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < out.size(); ++i) run_one(i);
        return out;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < out.size(); i += workers) run_one(i);
        });
    for (auto& t : pool) t.join();
    return out;
}

FisherState dual_antenna_information(const CrlbScenario& scenario_template, int steps, DualAntennaLayout layout,
                                     double offset_rad) {
    CrlbScenario s = scenario_template;
    s.steps = steps;
    s.validate();
    const double r = 2.0 * s.sigma * s.sigma;
    FisherState state;
    for (int k = 1; k <= steps; ++k) {
        const UavState uav = uav_pose_at(s, k);
        const double phi = relative_bearing(kOrigin, uav);
        double slope = s.pattern.slope_db_per_rad(phi);
        if (layout == DualAntennaLayout::TwoDirectional) slope -= s.pattern.slope_db_per_rad(phi - offset_rad);
        state = fim_step(state, (slope * bearing_gradient(kOrigin, uav)).transpose(), r);
    }
    return state;
}

std::optional<double> dual_antenna_fim(const CrlbScenario& scenario_template, int steps) {
    return crlb_det(dual_antenna_information(scenario_template, steps).information);
}

}  // namespace gyro
