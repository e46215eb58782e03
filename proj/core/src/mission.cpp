#include "gyrocopter/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gyrocopter/errors.hpp"

namespace gyro {

namespace {

constexpr double kEps = 1e-9;

double reflect(double v, double lo, double hi) {
    // a single fold is enough: one random-walk step is far smaller than the area
    if (v < lo) v = 2.0 * lo - v;
    if (v > hi) v = 2.0 * hi - v;
    return std::clamp(v, lo, hi);
}

double ground_height(const ScenarioConfig& config, const TerrainGrid* terrain, const Vec2& p) {
    return (terrain ? terrain->height_clamped(p) : 0.0) + config.source_height;
}

int tick_count(const ScenarioConfig& config) {
    return static_cast<int>(std::ceil(config.mission_timeout / config.truth_radio.pulse_period - kEps));
}

double gaussian_log_density(double residual, double variance) {
    return -0.5 * residual * residual / variance - 0.5 * std::log(kTwoPi * variance);
}

/// Received level of one detected pulse under the generating model.
double received_rssi(const ScenarioConfig& config, const GainPattern& pattern, const EnvironmentModel& env,
                     const Vec3& source, const UavState& uav, Rng& noise) {
    const SourceState s(source);
    return mean_rssi(config.truth_radio, pattern, s, uav) - terrain_loss(env, source, uav.position()) -
           env.extra_loss + noise.normal(0.0, config.truth_radio.noise_std);
}

}  // namespace

GroundTruth generate_ground_truth(const ScenarioConfig& config, Rng& rng) {
    const auto terrain = config.terrain_grid();
    const int steps = tick_count(config);
    GroundTruth truth;
    truth.reserve(config.sources.size());
    for (const auto& spec : config.sources) {
        std::vector<Vec3> path;
        path.reserve(static_cast<std::size_t>(steps) + 1);
        Vec2 p = spec.position;
        path.emplace_back(p.x(), p.y(), ground_height(config, terrain.get(), p));
        for (int k = 1; k <= steps; ++k) {
            p.x() = reflect(p.x() + rng.normal(0.0, config.source_sigma_q), config.bounds.x_min, config.bounds.x_max);
            p.y() = reflect(p.y() + rng.normal(0.0, config.source_sigma_q), config.bounds.y_min, config.bounds.y_max);
            path.emplace_back(p.x(), p.y(), ground_height(config, terrain.get(), p));
        }
        truth.push_back(std::move(path));
    }
    return truth;
}

std::vector<SourceSpec> randomize_sources(const ScenarioConfig& config, Rng& rng) {
    std::vector<SourceSpec> out = config.sources;
    for (auto& s : out)
        s.position = {rng.uniform(config.bounds.x_min, config.bounds.x_max),
                      rng.uniform(config.bounds.y_min, config.bounds.y_max)};
    return out;
}

double rotate_bearing_measure(const UavState& uav, const Vec3& source, double bearing_std, Rng& rng) {
    return wrap_two_pi(world_bearing(uav.horizontal(), source.head<2>()) + rng.normal(0.0, bearing_std));
}

double bearing_log_likelihood(double measured, const UavState& uav, const Vec2& particle, double bearing_std) {
    const Vec2 d = particle - uav.horizontal();
    if (d.x() == 0.0 && d.y() == 0.0) return kLogLikelihoodFloor;
    const double sd = std::max(bearing_std, deg2rad(0.1));
    const double residual = wrap_pi(measured - std::atan2(d.x(), d.y()));
    return std::max(gaussian_log_density(residual, sd * sd), kLogLikelihoodFloor);
}

double dual_antenna_measure(const GainPattern& pattern, double offset_db, const UavState& uav, const Vec3& source,
                            double sigma, Rng& rng) {
    const double phi = relative_bearing(source.head<2>(), uav);
    return pattern.gain_db(phi) + offset_db + rng.normal(0.0, std::sqrt(2.0) * sigma);
}

double dual_antenna_log_likelihood(double measured, const GainPattern& pattern, double offset_db,
                                   const UavState& uav, const Vec2& particle, double sigma) {
    const Vec2 d = particle - uav.horizontal();
    if (d.x() == 0.0 && d.y() == 0.0) return kLogLikelihoodFloor;
    const double phi = wrap_two_pi(std::atan2(d.x(), d.y()) - uav.heading());
    return gaussian_log_density(measured - pattern.gain_db(phi) - offset_db, 2.0 * sigma * sigma);
}

double rssi_ideal_log_likelihood(double measured, const RadioModel& truth, const GainPattern& pattern,
                                 const EnvironmentModel& env, const UavState& uav, const Vec3& particle,
                                 double sigma) {
    Vec3 p = particle;
    if (env.terrain && !env.terrain->contains(p.head<2>())) {
        // keep the loss lookup inside the raster for particles that drifted past its edge
        const auto& g = *env.terrain;
        p.x() = std::clamp(p.x(), g.origin().x(), g.origin().x() + (g.cols() - 1) * g.cell_size());
        p.y() = std::clamp(p.y(), g.origin().y(), g.origin().y() + (g.rows() - 1) * g.cell_size());
    }
    if ((p - uav.position()).head<2>().isZero(0.0)) return kLogLikelihoodFloor;
    const double predicted = mean_rssi(truth, pattern, SourceState(p), uav) - terrain_loss(env, p, uav.position()) -
                             env.extra_loss;
    return gaussian_log_density(measured - predicted, sigma * sigma);
}

bool RotateBearingSchedule::advance(double dt) {
    phase_time_ += dt;
    if (measuring_ && phase_time_ >= config_.rotation_time - kEps) {
        measuring_ = false;
        phase_time_ = 0.0;
        return true;
    }
    if (!measuring_ && phase_time_ >= config_.travel_leg - kEps) {
        measuring_ = true;
        phase_time_ = 0.0;
    }
    return false;
}

bool MissionResult::all_localized() const {
    return std::all_of(per_source.begin(), per_source.end(),
                       [](const SourceOutcome& s) { return s.localization_time.has_value(); });
}

int MissionResult::timeouts() const {
    return static_cast<int>(std::count_if(per_source.begin(), per_source.end(),
                                          [](const SourceOutcome& s) { return !s.localization_time; }));
}

double MissionResult::mean_error() const {
    double sum = 0.0;
    int n = 0;
    for (const auto& s : per_source)
        if (s.error) {
            sum += *s.error;
            ++n;
        }
    return n ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

nlohmann::json MissionResult::summary_json() const {
    nlohmann::json sources = nlohmann::json::array();
    for (const auto& s : per_source) {
        sources.push_back({{"id", s.id},
                           {"localized", s.localization_time.has_value()},
                           {"localization_time_s", s.localization_time ? nlohmann::json(*s.localization_time) : nullptr},
                           {"error_m", s.error ? nlohmann::json(*s.error) : nullptr},
                           {"final_error_m", s.final_error},
                           {"estimate_x", s.estimate.x()},
                           {"estimate_y", s.estimate.y()}});
    }
    const double me = mean_error();
    return {{"per_source", sources},
            {"total_time_s", total_time},
            {"all_localized", all_localized()},
            {"timeouts", timeouts()},
            {"mean_error_m", std::isnan(me) ? nlohmann::json(nullptr) : nlohmann::json(me)},
            {"detection_rate", detection_rate},
            {"pulses", pulses},
            {"detections", detections},
            {"skipped_updates", skipped_updates}};
}

MissionResult run_mission(const ScenarioConfig& config, std::uint64_t seed) {
    Rng truth_rng(derive_seed(seed, "truth"));
    return run_mission(config, generate_ground_truth(config, truth_rng), seed);
}

MissionResult run_mission(const ScenarioConfig& config, const GroundTruth& truth, std::uint64_t seed) {
    config.validate();
    const std::size_t n_sources = config.sources.size();
    if (truth.size() != n_sources) throw std::invalid_argument("ground truth does not match source count");

    MissionResult result;
    for (const auto& s : config.sources) result.per_source.push_back({s.id, std::nullopt, std::nullopt, 0.0, Vec2::Zero()});
    result.belief_det_trace.resize(n_sources);
    if (n_sources == 0) return result;

    const GainPattern& pattern = config.gain_pattern();
    const EnvironmentModel env = config.environment();
    const double dt = config.truth_radio.pulse_period;
    const int steps = std::min<int>(tick_count(config), static_cast<int>(truth.front().size()) - 1);

    Rng init_rng(derive_seed(seed, "init"));
    Rng detect_rng(derive_seed(seed, "detection"));
    Rng noise_rng(derive_seed(seed, "noise"));
    Rng filter_rng(derive_seed(seed, "filter"));

    std::vector<ParticleBelief> beliefs;
    beliefs.reserve(n_sources);
    for (const auto& s : config.sources) beliefs.push_back(initialize(config.bounds, config.filter.n_particles, init_rng, s.id));

    const TransitionModel transition{config.filter.sigma_q, dt};
    const DifferentialLikelihood likelihood(config.window_m, config.filter.sigma_db);
    std::vector<RollingWindow> windows(n_sources, RollingWindow(static_cast<std::size_t>(config.window_m), 1.5 * dt));
    // the baseline opens with a rotation: the initial belief gives nowhere useful to go
    RotateBearingSchedule schedule(config.rotate_bearing);
    // per source: smallest boresight misalignment seen among this rotation's detections, and its tick
    struct Alignment {
        double misalignment = std::numeric_limits<double>::infinity();
        std::size_t tick = 0;
    };
    std::vector<Alignment> alignment(n_sources);
    const double bearing_std = deg2rad(config.rotate_bearing.bearing_std_deg);

    UavState uav(Vec3(config.uav_start.position().x(), config.uav_start.position().y(), config.altitude),
                 config.uav_start.heading());
    Action action{Vec2::Zero(), dt};
    double action_left = 0.0;
    std::optional<int> target;
    auto index_of = [&](int id) {
        for (std::size_t i = 0; i < n_sources; ++i)
            if (config.sources[i].id == id) return i;
        return n_sources;
    };
    auto replan = [&] {
        target = select_nearest_source(beliefs, uav);
        if (!target) return;
        const ParticleBelief& b = beliefs[index_of(*target)];
        action = plan(uav, b, config.planner, transition, config.bounds);
        action_left = action.duration;
    };

    result.trajectory.emplace_back(0.0, uav);
    for (std::size_t s = 0; s < n_sources; ++s) result.belief_det_trace[s].push_back({0.0, covariance_det(beliefs[s])});
    if (config.method != Method::RotateBearing || !schedule.measuring()) replan();

    double t = 0.0;
    bool done = false;
    for (int k = 1; k <= steps && !done; ++k) {
        t = k * dt;

        bool rotation_done = false;
        if (config.method == Method::RotateBearing) {
            const Action hover{Vec2::Zero(), dt};
            uav = propagate_uav(uav, schedule.measuring() ? hover : action, schedule.yaw_rate(), dt);
            rotation_done = schedule.advance(dt);
        } else {
            uav = propagate_uav(uav, action, config.planner.gyration_rate, dt);
        }
        const Vec2 clamped = config.bounds.clamp(uav.horizontal());
        uav.set_position(Vec3(clamped.x(), clamped.y(), config.altitude));
        action_left -= dt;

        for (std::size_t s = 0; s < n_sources; ++s) {
            ++result.pulses;
            const bool detected = detect_rng.bernoulli(env.detection_prob);
            if (!detected) continue;
            ++result.detections;
            ParticleBelief& belief = beliefs[s];
            const Vec3& src = truth[s][static_cast<std::size_t>(k)];
            if (belief.localized) continue;
            switch (config.method) {
                case Method::Gyro: {
                    windows[s].push({t, received_rssi(config, pattern, env, src, uav, noise_rng), uav});
                    if (windows[s].full())
                        belief = update(predict(std::move(belief), transition, filter_rng),
                                        difference_window(windows[s].window()), pattern, likelihood, filter_rng);
                    break;
                }
                case Method::DualAntenna: {
                    const double y = dual_antenna_measure(pattern, config.dual_antenna.offset_db, uav, src,
                                                          config.truth_radio.noise_std, noise_rng);
                    belief = update_with(
                        predict(std::move(belief), transition, filter_rng),
                        [&](const Vec2& p) {
                            return dual_antenna_log_likelihood(y, pattern, config.dual_antenna.offset_db, uav, p,
                                                               config.filter.sigma_db);
                        },
                        filter_rng);
                    break;
                }
                case Method::RssiIdeal: {
                    const double z = received_rssi(config, pattern, env, src, uav, noise_rng);
                    const auto* terrain = env.terrain.get();
                    belief = update_with(
                        predict(std::move(belief), transition, filter_rng),
                        [&](const Vec2& p) {
                            const Vec3 p3(p.x(), p.y(), ground_height(config, terrain, p));
                            return rssi_ideal_log_likelihood(z, config.truth_radio, pattern, env, uav, p3,
                                                             config.filter.sigma_db);
                        },
                        filter_rng);
                    break;
                }
                case Method::RotateBearing:
                    if (schedule.measuring() || rotation_done) {
                        const double off = std::abs(wrap_pi(world_bearing(uav.horizontal(), src.head<2>()) - uav.heading()));
                        if (off < alignment[s].misalignment) alignment[s] = {off, static_cast<std::size_t>(k)};
                    }
                    break;
            }
        }

        if (rotation_done) {
            for (std::size_t s = 0; s < n_sources; ++s) {
                if (std::isfinite(alignment[s].misalignment) && !beliefs[s].localized) {
                    // the bearing refers to where the source was when the boresight swept past it
                    const double bearing = rotate_bearing_measure(uav, truth[s][alignment[s].tick], bearing_std, noise_rng);
                    beliefs[s] = update_with(
                        predict(std::move(beliefs[s]), transition, filter_rng),
                        [&](const Vec2& p) { return bearing_log_likelihood(bearing, uav, p, bearing_std); },
                        filter_rng);
                }
                alignment[s] = {};
            }
        }

        bool target_done = false;
        for (std::size_t s = 0; s < n_sources; ++s) {
            ParticleBelief& b = beliefs[s];
            if (b.localized) continue;
            result.belief_det_trace[s].push_back({t, covariance_det(b)});
            if (is_localized(b, config.localized_threshold)) {
                auto& out = result.per_source[s];
                out.localization_time = t;
                out.estimate = *b.localized_estimate;
                out.error = (*b.localized_estimate - truth[s][static_cast<std::size_t>(k)].head<2>()).norm();
                if (target && *target == b.source_id) target_done = true;
            }
        }
        result.trajectory.emplace_back(t, uav);

        if (std::all_of(beliefs.begin(), beliefs.end(), [](const ParticleBelief& b) { return b.localized; })) {
            done = true;
            break;
        }

        if (config.method == Method::RotateBearing) {
            if (schedule.measuring()) continue;
            if (rotation_done || target_done || action_left <= kEps) replan();
        } else if (target_done || action_left <= kEps) {
            replan();
        }
    }

    result.total_time = done ? t : steps * dt;
    const std::size_t last = static_cast<std::size_t>(std::min<double>(std::round(result.total_time / dt), steps));
    for (std::size_t s = 0; s < n_sources; ++s) {
        auto& out = result.per_source[s];
        if (!out.localization_time) out.estimate = estimate_mean(beliefs[s]);
        out.final_error = (out.estimate - truth[s][last].head<2>()).norm();
        result.skipped_updates += beliefs[s].skipped_updates;
    }
    result.detection_rate = result.pulses ? static_cast<double>(result.detections) / result.pulses : 0.0;
    return result;
}

std::vector<ConvergenceTrace> rotation_speed_convergence(const ScenarioConfig& config,
                                                         const std::vector<double>& zeta_deg_s, std::uint64_t seed,
                                                         const TransectSetup& transect) {
    config.validate();
    if (config.sources.empty()) throw ConfigError("sources", "convergence run needs a source");
    if (zeta_deg_s.empty()) throw DomainError("convergence run needs at least one yaw rate");
    const GainPattern& pattern = config.gain_pattern();
    const EnvironmentModel env = config.environment();
    const double dt = config.truth_radio.pulse_period;
    const int steps = static_cast<int>(std::ceil(transect.duration / dt - kEps));
    const Vec2 src2 = config.sources.front().position;
    const Vec3 source(src2.x(), src2.y(), ground_height(config, env.terrain.get(), src2));
    const Vec2 start = src2 + transect.start_offset;
    const TransitionModel transition{config.filter.sigma_q, dt};
    const DifferentialLikelihood likelihood(config.window_m, config.filter.sigma_db);

    std::vector<ConvergenceTrace> out;
    for (const double zeta : zeta_deg_s) {
        Rng init_rng(derive_seed(seed, "init"));
        Rng detect_rng(derive_seed(seed, "detection"));
        Rng noise_rng(derive_seed(seed, "noise"));
        Rng filter_rng(derive_seed(seed, "filter"));
        ParticleBelief belief = initialize(config.bounds, config.filter.n_particles, init_rng, config.sources.front().id);
        RollingWindow window(static_cast<std::size_t>(config.window_m), 1.5 * dt);
        ConvergenceTrace trace{zeta, {{0.0, covariance_det(belief)}}, std::nullopt};
        for (int k = 1; k <= steps; ++k) {
            const double t = k * dt;
            const Vec2 p = start + transect.velocity * t;
            const UavState uav(Vec3(p.x(), p.y(), config.altitude), deg2rad(zeta) * t);
            if (detect_rng.bernoulli(env.detection_prob)) {
                window.push({t, received_rssi(config, pattern, env, source, uav, noise_rng), uav});
                if (window.full())
                    belief = update(predict(std::move(belief), transition, filter_rng), difference_window(window.window()), pattern, likelihood, filter_rng);
            }
            const double det = covariance_det(belief);
            trace.trace.push_back({t, det});
            if (!trace.time_to_threshold && det < config.localized_threshold) trace.time_to_threshold = t;
        }
        out.push_back(std::move(trace));
    }
    return out;
}

std::vector<ConvergenceTrace> rotation_speed_convergence(const ScenarioConfig& config,
                                                         const std::vector<double>& zeta_deg_s, std::uint64_t seed) {
    return rotation_speed_convergence(config, zeta_deg_s, seed, config.transect);
}

}  // namespace gyro
