#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gyrocopter/crlb.hpp"
#include "gyrocopter/gain_pattern.hpp"
#include "gyrocopter/geometry.hpp"
#include "gyrocopter/planner.hpp"
#include "gyrocopter/propagation.hpp"
#include "gyrocopter/terrain.hpp"

namespace gyro {

enum class Method { Gyro, DualAntenna, RotateBearing, RssiIdeal };

std::string to_string(Method m);
std::string to_string(PlannerMode m);
/// Throws ConfigError for an unknown name.
Method parse_method(const std::string& name);
PlannerMode parse_planner_mode(const std::string& name);

struct TerrainSpec {
    enum class Kind { None, Synthetic, File };
    Kind kind = Kind::None;
    double cell_size = 10.0;  ///< synthetic
    double relief = 40.0;     ///< synthetic, m peak-to-trough
    std::uint64_t seed = 1;   ///< synthetic
    std::string path;         ///< file
};

struct PatternSpec {
    enum class Kind { HAntenna, Parametric, Tabulated };
    Kind kind = Kind::HAntenna;
    double boresight_gain = 6.15;
    double front_to_back = 10.0;
    double null_depth = 20.0;  ///< h_antenna
    double step_deg = 5.0;     ///< h_antenna
    std::string path;          ///< tabulated
};

struct SourceSpec {
    int id = 0;
    Vec2 position = Vec2::Zero();
};

struct FilterConfig {
    int n_particles = 3000;
    double sigma_q = 2.0;   ///< m per pulse, filter random walk
    double sigma_db = 2.0;  ///< dB, per-sample RSSI noise assumed by the likelihood
};

struct RotateBearingConfig {
    double rotation_time = 10.0;     ///< s stationary per bearing
    double bearing_std_deg = 9.0;
    double travel_leg = 8.0;         ///< s of travel between rotations
};

struct DualAntennaConfig {
    double offset_db = 0.0;  ///< reference channel gain c
};

/// Orbit scenario for the bound analysis; the pattern comes from the scenario's pattern spec.
struct CrlbSpec {
    double radius = 50.0;             ///< m
    double revolve_rate_deg_s = 3.6;  ///< orbit angular speed
    double sample_period = 1.0;       ///< s
    double sigma_db = 4.0;
    int steps = 10000;
};

/// Straight constant-speed pass by a single static source. The start is given relative to
/// the source.
struct TransectSetup {
    Vec2 start_offset{-450.0, -150.0};
    Vec2 velocity{3.0, 0.0};  ///< m/s
    double duration = 300.0;  ///< s
};

/// Full description of one simulated experiment.
struct ScenarioConfig {
    Bounds bounds{0.0, 0.0, 1000.0, 1000.0};
    TerrainSpec terrain;
    std::vector<SourceSpec> sources;
    double source_sigma_q = 2.0;  ///< m per pulse, ground-truth random walk
    double source_height = 1.0;   ///< m above terrain
    RadioModel truth_radio{20.0, 1.0, 3.0, 2.0, 1.0};
    RadioModel model_radio{10.0, 1.0, 2.0, 2.0, 1.0};
    double extra_loss = 0.0;
    double carrier_freq = 0.15;  ///< GHz
    double detection_prob = 1.0;
    PatternSpec pattern;
    Method method = Method::Gyro;
    PlannerConfig planner;
    int window_m = 2;
    double localized_threshold = 2e4;  ///< m^4
    double mission_timeout = 1500.0;   ///< s
    UavState uav_start{Vec3(100.0, 100.0, 60.0), 0.0};
    double altitude = 60.0;  ///< m above datum
    FilterConfig filter;
    RotateBearingConfig rotate_bearing;
    DualAntennaConfig dual_antenna;
    CrlbSpec crlb;
    TransectSetup transect;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;

    /// Terrain and pattern built from their specs. Built once and cached.
    std::shared_ptr<const TerrainGrid> terrain_grid() const;
    const GainPattern& gain_pattern() const;
    EnvironmentModel environment() const;

    /// Drop cached terrain/pattern after editing their specs.
    void invalidate_cache();

private:
    mutable std::shared_ptr<const TerrainGrid> terrain_cache_;
    mutable std::shared_ptr<const GainPattern> pattern_cache_;
    mutable bool terrain_built_ = false;
};

/// Bound-analysis scenario built from `config.crlb` and the configured pattern.
CrlbScenario crlb_scenario(const ScenarioConfig& config);

/// Simulation comparison setting: 1 km x 1 km, 5 mobile sources, synthetic hills.
ScenarioConfig default_scenario();
/// Field-trial setting: 4 static sources, v = 5.5 m/s, 40 deg/s, sigma = 5 dB.
ScenarioConfig field_preset();
/// One static source at the centre, no terrain: the fixed-transect rotation-speed study.
ScenarioConfig convergence_preset();
/// "default", "field" or "convergence".
ScenarioConfig preset(const std::string& name);

/// Missing keys keep the defaults of `base`. Unknown keys are rejected.
ScenarioConfig scenario_from_json(const nlohmann::json& j, const ScenarioConfig& base = default_scenario());
ScenarioConfig load_scenario(const std::string& path, const ScenarioConfig& base = default_scenario());
nlohmann::json scenario_to_json(const ScenarioConfig& config);

}  // namespace gyro
