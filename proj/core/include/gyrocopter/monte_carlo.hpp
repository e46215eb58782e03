#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gyrocopter/mission.hpp"
#include "gyrocopter/scenario.hpp"

namespace gyro {

/// One mission inside a batch.
struct RunRecord {
    int track = 0;
    int run = 0;
    Method method = Method::Gyro;
    PlannerMode planner = PlannerMode::Continuous;
    double sigma_q = 0.0;  ///< source random-walk std used for this run
    std::uint64_t seed = 0;
    double total_time = 0.0;
    double mean_error = 0.0;  ///< NaN when no source was localized
    int timeouts = 0;
    double detection_rate = 0.0;
};

struct SampleStats {
    double mean = 0.0;
    double std = 0.0;  ///< sample standard deviation, 0 for a single value
    int count = 0;
};

/// Mean +/- std over a set of runs. Recomputable from the per-run rows alone.
struct BatchSummary {
    Method method = Method::Gyro;
    PlannerMode planner = PlannerMode::Continuous;
    double sigma_q = 0.0;
    int runs = 0;
    SampleStats total_time;
    SampleStats mean_error;  ///< over runs with at least one localized source
    double timeout_rate = 0.0;  ///< timed-out sources / (runs * sources)
    double detection_rate = 0.0;
};

struct MonteCarloResult {
    std::vector<RunRecord> runs;  ///< sorted by (track, run)
    BatchSummary summary;
};

/// Raised when one mission of a batch fails; carries the failing run seed.
class BatchRunError : public std::runtime_error {
public:
    BatchRunError(std::uint64_t seed, const std::string& what)
        : std::runtime_error(what), seed_(seed) {}
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

SampleStats sample_stats(const std::vector<double>& values);
BatchSummary summarize_runs(const std::vector<RunRecord>& runs, int sources_per_run);

/// Ground-truth set for one track: randomized initial positions plus the random walks.
/// Depends only on (template, seed, track), so every method sees the same paths.
GroundTruth track_ground_truth(const ScenarioConfig& config, std::uint64_t seed, int track,
                               std::vector<SourceSpec>* sources_out = nullptr);

/// n_tracks ground-truth sets times runs_per_track missions each, spread over `jobs` threads.
/// Output is independent of `jobs`.
MonteCarloResult run_monte_carlo(const ScenarioConfig& config, int n_tracks, int runs_per_track,
                                 std::uint64_t seed, int jobs = 1);

/// Template with both the ground-truth walk and the filter's process noise set to sigma_q.
/// The filter keeps a floor of `filter_floor` so particles never collapse onto one point.
ScenarioConfig with_source_mobility(ScenarioConfig config, double sigma_q, double filter_floor = 1.0);

}  // namespace gyro
