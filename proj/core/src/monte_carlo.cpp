#include "gyrocopter/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "gyrocopter/errors.hpp"
#include "gyrocopter/rng.hpp"

namespace gyro {

SampleStats sample_stats(const std::vector<double>& values) {
    SampleStats s;
    s.count = static_cast<int>(values.size());
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.count;
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (s.count - 1));
    }
    return s;
}

BatchSummary summarize_runs(const std::vector<RunRecord>& runs, int sources_per_run) {
    BatchSummary out;
    out.runs = static_cast<int>(runs.size());
    if (runs.empty()) return out;
    out.method = runs.front().method;
    out.planner = runs.front().planner;
    out.sigma_q = runs.front().sigma_q;
    std::vector<double> times, errors;
    double timeouts = 0.0, detection = 0.0;
    for (const auto& r : runs) {
        times.push_back(r.total_time);
        if (!std::isnan(r.mean_error)) errors.push_back(r.mean_error);
        timeouts += r.timeouts;
        detection += r.detection_rate;
    }
    out.total_time = sample_stats(times);
    out.mean_error = sample_stats(errors);
    out.timeout_rate = sources_per_run > 0 ? timeouts / (static_cast<double>(runs.size()) * sources_per_run) : 0.0;
    out.detection_rate = detection / static_cast<double>(runs.size());
    return out;
}

GroundTruth track_ground_truth(const ScenarioConfig& config, std::uint64_t seed, int track,
                               std::vector<SourceSpec>* sources_out) {
    Rng rng(derive_seed(seed, "track", static_cast<std::uint64_t>(track)));
    ScenarioConfig c = config;
    c.sources = randomize_sources(config, rng);
    GroundTruth truth = generate_ground_truth(c, rng);
    if (sources_out) *sources_out = c.sources;
    return truth;
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& config, int n_tracks, int runs_per_track,
                                 std::uint64_t seed, int jobs) {
    if (n_tracks < 1) throw ConfigError("tracks", "need at least one track");
    if (runs_per_track < 1) throw ConfigError("runs", "need at least one run per track");
    if (jobs < 1) throw ConfigError("jobs", "need at least one job");
    config.validate();
    // build the shared terrain and pattern once, before any copies reach the workers
    (void)config.terrain_grid();
    (void)config.gain_pattern();

    struct Track {
        ScenarioConfig config;
        GroundTruth truth;
    };
    std::vector<Track> tracks;
    tracks.reserve(static_cast<std::size_t>(n_tracks));
    for (int k = 0; k < n_tracks; ++k) {
        Track t{config, {}};
        t.truth = track_ground_truth(config, seed, k, &t.config.sources);
        tracks.push_back(std::move(t));
    }

    const std::size_t total = static_cast<std::size_t>(n_tracks) * static_cast<std::size_t>(runs_per_track);
    std::vector<RunRecord> records(total);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::uint64_t failing_seed = 0;
    std::size_t failing_index = total;

    auto worker = [&] {
        for (std::size_t i = next++; i < total && !failed; i = next++) {
            const int k = static_cast<int>(i / static_cast<std::size_t>(runs_per_track));
            const int r = static_cast<int>(i % static_cast<std::size_t>(runs_per_track));
            const std::uint64_t run_seed =
                derive_seed(seed, "run", static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r));
            try {
                const Track& t = tracks[static_cast<std::size_t>(k)];
                const MissionResult m = run_mission(t.config, t.truth, run_seed);
                records[i] = {k,           r,          config.method, config.planner.mode, config.source_sigma_q,
                              run_seed,    m.total_time, m.mean_error(), m.timeouts(),      m.detection_rate};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                // keep the lowest failing index so the report does not depend on scheduling
                if (i < failing_index) {
                    failing_index = i;
                    failing_seed = run_seed;
                    first_error = std::current_exception();
                }
                failed = true;
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) {
        std::string what = "unknown error";
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        throw BatchRunError(failing_seed, fmt::format("run with seed {} failed: {}", failing_seed, what));
    }

    MonteCarloResult out;
    out.runs = std::move(records);
    out.summary = summarize_runs(out.runs, static_cast<int>(config.sources.size()));
    return out;
}

ScenarioConfig with_source_mobility(ScenarioConfig config, double sigma_q, double filter_floor) {
    if (!(sigma_q >= 0.0)) throw ConfigError("sigma_q", "must be >= 0");
    config.source_sigma_q = sigma_q;
    config.filter.sigma_q = std::max(sigma_q, filter_floor);
    return config;
}

}  // namespace gyro
