#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>

#include <Eigen/Core>
#include <Eigen/LU>

#include "gyrocopter/errors.hpp"
#include "gyrocopter/gain_pattern.hpp"
#include "gyrocopter/geometry.hpp"
#include "gyrocopter/measurement.hpp"
#include "gyrocopter/rng.hpp"

namespace gyro {

/// Log-likelihood values at or below this carry no information; an update where every
/// particle sits at the floor is skipped.
inline constexpr double kLogLikelihoodFloor = -60.0;

/// Weighted particle approximation of one source's horizontal position.
struct ParticleBelief {
    int source_id = 0;
    Eigen::Matrix2Xd particles;  ///< column i is particle i (x, y), metres
    Eigen::VectorXd weights;     ///< sums to 1
    bool localized = false;
    std::optional<Vec2> localized_estimate;
    int skipped_updates = 0;  ///< updates dropped because every likelihood underflowed
    int resample_count = 0;

    Eigen::Index size() const { return particles.cols(); }
    void write_csv(std::ostream& out) const;
};

/// Zero-mean random walk on the horizontal position.
struct TransitionModel {
    double sigma_q = 2.0;  ///< m per step
    double dt = 1.0;       ///< s
};

/// Uniform particles over `bounds`, equal weights. Throws DomainError on a degenerate
/// rectangle or zero particles.
ParticleBelief initialize(const Bounds& bounds, int n_particles, Rng& rng, int source_id = 0);

/// Random-walk prediction over one step; weights unchanged.
ParticleBelief predict(ParticleBelief belief, const TransitionModel& model, Rng& rng);

double effective_sample_size(const ParticleBelief& belief);

/// Systematic resampling to equal weights.
ParticleBelief systematic_resample(ParticleBelief belief, Rng& rng);

/// Bayes update with a per-particle log-likelihood `log_lik(Vec2) -> double`.
/// Weights are combined in log domain with max subtraction. If no particle scores above
/// kLogLikelihoodFloor the belief is returned unchanged with skipped_updates incremented.
/// Resamples when the effective sample size drops below half the particle count.
template <typename LogLik>
ParticleBelief update_with(ParticleBelief belief, LogLik&& log_lik, Rng& rng) {
    const Eigen::Index n = belief.size();
    Eigen::VectorXd lw(n);
    double best = -std::numeric_limits<double>::infinity();
    double best_ll = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ll = log_lik(Vec2(belief.particles.col(i)));
        const double w = belief.weights[i];
        lw[i] = (w > 0.0 && !std::isnan(ll)) ? std::log(w) + ll : -std::numeric_limits<double>::infinity();
        if (lw[i] > best) best = lw[i];
        if (w > 0.0 && ll > best_ll) best_ll = ll;
    }
    if (!std::isfinite(best) || !(best_ll > kLogLikelihoodFloor)) {
        ++belief.skipped_updates;
        return belief;
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        lw[i] = std::exp(lw[i] - best);
        total += lw[i];
    }
    belief.weights = lw / total;
    if (effective_sample_size(belief) < 0.5 * static_cast<double>(n)) belief = systematic_resample(std::move(belief), rng);
    return belief;
}

/// Update with a differential RSSI measurement.
ParticleBelief update(ParticleBelief belief, const DifferentialMeasurement& meas, const GainPattern& pattern,
                      const DifferentialLikelihood& likelihood, Rng& rng);
ParticleBelief update(ParticleBelief belief, const DifferentialMeasurement& meas, const GainPattern& pattern,
                      double sigma, Rng& rng);

Vec2 estimate_mean(const ParticleBelief& belief);
Eigen::Matrix2d covariance(const ParticleBelief& belief);
double covariance_det(const ParticleBelief& belief);

/// det(covariance) < threshold. The first time this holds the belief is latched as
/// localized and its estimate frozen at the current mean; afterwards it stays true.
bool is_localized(ParticleBelief& belief, double threshold);

}  // namespace gyro
