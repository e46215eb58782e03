#include "gyrocopter/particle_filter.hpp"

#include <ostream>

#include <fmt/format.h>

namespace gyro {

void ParticleBelief::write_csv(std::ostream& out) const {
    out << "particle_x,particle_y,weight\n";
    for (Eigen::Index i = 0; i < size(); ++i)
        out << fmt::format("{},{},{}\n", particles(0, i), particles(1, i), weights[i]);
}

ParticleBelief initialize(const Bounds& bounds, int n_particles, Rng& rng, int source_id) {
    if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) throw DomainError("initialization bounds are degenerate");
    if (n_particles < 1) throw DomainError("need at least one particle");
    ParticleBelief b;
    b.source_id = source_id;
    b.particles.resize(2, n_particles);
    for (int i = 0; i < n_particles; ++i) {
        b.particles(0, i) = rng.uniform(bounds.x_min, bounds.x_max);
        b.particles(1, i) = rng.uniform(bounds.y_min, bounds.y_max);
    }
    b.weights = Eigen::VectorXd::Constant(n_particles, 1.0 / n_particles);
    return b;
}

ParticleBelief predict(ParticleBelief belief, const TransitionModel& model, Rng& rng) {
    if (model.sigma_q == 0.0) return belief;
    for (Eigen::Index i = 0; i < belief.size(); ++i) {
        belief.particles(0, i) += rng.normal(0.0, model.sigma_q);
        belief.particles(1, i) += rng.normal(0.0, model.sigma_q);
    }
    return belief;
}

double effective_sample_size(const ParticleBelief& belief) { return 1.0 / belief.weights.squaredNorm(); }

ParticleBelief systematic_resample(ParticleBelief belief, Rng& rng) {
    const Eigen::Index n = belief.size();
    Eigen::Matrix2Xd out(2, n);
    const double step = 1.0 / static_cast<double>(n);
    double u = rng.uniform(0.0, step);
    double cumulative = belief.weights[0];
    Eigen::Index j = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        while (u > cumulative && j + 1 < n) cumulative += belief.weights[++j];
        out.col(i) = belief.particles.col(j);
        u += step;
    }
    belief.particles = std::move(out);
    belief.weights.setConstant(step);
    ++belief.resample_count;
    return belief;
}

ParticleBelief update(ParticleBelief belief, const DifferentialMeasurement& meas, const GainPattern& pattern,
                      const DifferentialLikelihood& likelihood, Rng& rng) {
    if (meas.window_size() != static_cast<std::size_t>(likelihood.window_size()))
        throw std::invalid_argument("measurement window size does not match likelihood");
    return update_with(
        std::move(belief),
        [&](const Vec2& p) {
            try {
                return likelihood.log_likelihood(meas, p, pattern);
            } catch (const GeometryError&) {
                // particle exactly under the sensor: no bearing, no information
                return kLogLikelihoodFloor;
            }
        },
        rng);
}

ParticleBelief update(ParticleBelief belief, const DifferentialMeasurement& meas, const GainPattern& pattern,
                      double sigma, Rng& rng) {
    const DifferentialLikelihood likelihood(static_cast<int>(meas.window_size()), sigma);
    return update(std::move(belief), meas, pattern, likelihood, rng);
}

Vec2 estimate_mean(const ParticleBelief& belief) { return belief.particles * belief.weights; }

Eigen::Matrix2d covariance(const ParticleBelief& belief) {
    const Vec2 mean = estimate_mean(belief);
    Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
    for (Eigen::Index i = 0; i < belief.size(); ++i) {
        const Vec2 d = belief.particles.col(i) - mean;
        c += belief.weights[i] * d * d.transpose();
    }
    return c;
}

double covariance_det(const ParticleBelief& belief) { return covariance(belief).determinant(); }

bool is_localized(ParticleBelief& belief, double threshold) {
    if (belief.localized) return true;
    if (covariance_det(belief) < threshold) {
        belief.localized = true;
        belief.localized_estimate = estimate_mean(belief);
    }
    return belief.localized;
}

}  // namespace gyro
