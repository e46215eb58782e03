#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "gyrocopter/gain_pattern.hpp"
#include "gyrocopter/geometry.hpp"

namespace gyro {

/// Sensor revolving around a source at the origin while spinning about its own axis.
struct CrlbScenario {
    double radius = 50.0;                ///< m
    double revolve_rate = deg2rad(3.6);  ///< rad/s, orbit angular speed
    double self_rotation = 0.0;          ///< rad/s, yaw rate
    double sample_period = 1.0;          ///< s
    double sigma = 4.0;                  ///< dB, per-sample RSSI noise
    GainPattern pattern = GainPattern::h_antenna();
    int steps = 10000;

    void validate() const;
};

/// Accumulated Fisher information about the source's horizontal position.
struct FisherState {
    Eigen::Matrix2d information = Eigen::Matrix2d::Zero();
    int step = 0;
};

/// Pose at sample `step`: orbit position (r sin wt, r cos wt, 0), heading fixed in the world
/// frame at the initial bearing to the source plus self_rotation * t.
UavState uav_pose_at(const CrlbScenario& scenario, int step);

/// d/d(source) of G(phi_curr) - G(phi_prev).
Eigen::RowVector2d measurement_jacobian(const Vec2& source, const UavState& uav_prev, const UavState& uav_curr,
                                        const GainPattern& pattern);

/// J <- J + H^T H / r (static source, so the transition is the identity).
FisherState fim_step(FisherState state, const Eigen::RowVector2d& h, double r_scalar);

/// det(J^-1), or nullopt while J is numerically singular.
std::optional<double> crlb_det(const Eigen::Matrix2d& information);

struct CrlbTracePoint {
    int step;
    std::optional<double> det_crlb;  ///< nullopt = singular
};

/// Differential (m = 2) measurement pipeline; one entry per step 1..steps.
std::vector<CrlbTracePoint> crlb_det_trace(const CrlbScenario& scenario);

/// Final-step information of the differential pipeline, without the trace.
FisherState differential_fim(const CrlbScenario& scenario);

struct SweepPoint {
    double angle_deg;                ///< self rotation per sample period
    std::optional<double> det_crlb;
};

/// One pipeline run per angle with self_rotation = angle / sample_period; the orbit rate
/// comes from the template unchanged.
std::vector<SweepPoint> sweep_rotation(const CrlbScenario& scenario_template, const std::vector<double>& angles_deg,
                                       int steps, int jobs = 1);

enum class DualAntennaLayout { DirectionalOmni, TwoDirectional };

/// Single-instant (directional minus reference) measurement with noise variance 2 sigma^2.
/// For the two-directional layout the reference is the same pattern rotated by
/// `offset_rad`.
FisherState dual_antenna_information(const CrlbScenario& scenario_template, int steps,
                                     DualAntennaLayout layout = DualAntennaLayout::DirectionalOmni,
                                     double offset_rad = kPi);
std::optional<double> dual_antenna_fim(const CrlbScenario& scenario_template, int steps);

}  // namespace gyro
