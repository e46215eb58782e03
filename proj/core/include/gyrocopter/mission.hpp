#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "gyrocopter/measurement.hpp"
#include "gyrocopter/particle_filter.hpp"
#include "gyrocopter/scenario.hpp"

namespace gyro {

/// Source positions at every pulse tick 0..steps; truth[s][k] is source s at t = k * pulse_period.
using GroundTruth = std::vector<std::vector<Vec3>>;

/// Independent horizontal Gaussian random walks (std source_sigma_q per pulse), reflected
/// at the bounds; z follows the terrain plus source_height.
GroundTruth generate_ground_truth(const ScenarioConfig& config, Rng& rng);

/// Uniform random initial positions inside the bounds, ids kept from the config.
std::vector<SourceSpec> randomize_sources(const ScenarioConfig& config, Rng& rng);

// ---- per-method measurement models ----------------------------------------------------

/// World-frame bearing to the source with wrapped Gaussian noise.
double rotate_bearing_measure(const UavState& uav, const Vec3& source, double bearing_std, Rng& rng);
/// Gaussian on the wrapped residual, floored at kLogLikelihoodFloor.
double bearing_log_likelihood(double measured, const UavState& uav, const Vec2& particle, double bearing_std);

/// Directional minus reference channel: G(phi) + c + N(0, 2 sigma^2).
double dual_antenna_measure(const GainPattern& pattern, double offset_db, const UavState& uav, const Vec3& source,
                            double sigma, Rng& rng);
double dual_antenna_log_likelihood(double measured, const GainPattern& pattern, double offset_db,
                                   const UavState& uav, const Vec2& particle, double sigma);

/// Scalar RSSI likelihood under the exact generating model (truth radio, true terrain).
double rssi_ideal_log_likelihood(double measured, const RadioModel& truth, const GainPattern& pattern,
                                 const EnvironmentModel& env, const UavState& uav, const Vec3& particle, double sigma);

/// Travel/rotate cadence of the rotation-for-bearing baseline: `travel_leg` seconds moving,
/// then `rotation_time` seconds stationary while spinning once. A bearing is produced at the
/// end of each rotation.
class RotateBearingSchedule {
public:
    /// Starts with a rotation unless start_measuring is false.
    explicit RotateBearingSchedule(const RotateBearingConfig& config, bool start_measuring = true)
        : config_(config), measuring_(start_measuring) {}

    bool measuring() const { return measuring_; }
    /// Advance by dt. Returns true when a rotation completes during this step.
    bool advance(double dt);
    /// Yaw rate while rotating (one turn per rotation_time), zero while travelling.
    double yaw_rate() const { return measuring_ ? kTwoPi / config_.rotation_time : 0.0; }

private:
    RotateBearingConfig config_;
    bool measuring_;
    double phase_time_ = 0.0;
};

// ---- missions --------------------------------------------------------------------------

struct SourceOutcome {
    int id = 0;
    std::optional<double> localization_time;  ///< nullopt = timed out
    std::optional<double> error;              ///< at declaration, m
    double final_error = 0.0;                 ///< mean estimate vs truth at mission end, m
    Vec2 estimate = Vec2::Zero();             ///< frozen estimate (or final mean)
};

struct DetTracePoint {
    double t;
    double det;
};

struct MissionResult {
    std::vector<SourceOutcome> per_source;
    double total_time = 0.0;
    double detection_rate = 0.0;
    std::int64_t pulses = 0;
    std::int64_t detections = 0;
    std::vector<std::pair<double, UavState>> trajectory;
    std::vector<std::vector<DetTracePoint>> belief_det_trace;  ///< per source
    int skipped_updates = 0;

    bool all_localized() const;
    int timeouts() const;
    /// Mean declaration error over localized sources; NaN when none.
    double mean_error() const;
    nlohmann::json summary_json() const;
};

/// Closed-loop mission with ground truth drawn from the seed.
MissionResult run_mission(const ScenarioConfig& config, std::uint64_t seed);
/// Closed-loop mission on a given ground truth (shared across methods in a batch).
MissionResult run_mission(const ScenarioConfig& config, const GroundTruth& truth, std::uint64_t seed);

// ---- rotation-speed convergence --------------------------------------------------------

struct ConvergenceTrace {
    double zeta_deg_s;
    std::vector<DetTracePoint> trace;
    std::optional<double> time_to_threshold;
};

/// Runs the differential filter along the same transect and noise draws at each yaw rate.
/// Uses the config's first source (static), radio models, pattern, filter and threshold.
std::vector<ConvergenceTrace> rotation_speed_convergence(const ScenarioConfig& config,
                                                         const std::vector<double>& zeta_deg_s, std::uint64_t seed,
                                                         const TransectSetup& transect);
/// Same, along `config.transect`.
std::vector<ConvergenceTrace> rotation_speed_convergence(const ScenarioConfig& config,
                                                         const std::vector<double>& zeta_deg_s, std::uint64_t seed);

}  // namespace gyro
