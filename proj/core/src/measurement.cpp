#include "gyrocopter/measurement.hpp"

#include <cmath>
#include <memory>

#include <fmt/format.h>

#include "gyrocopter/angles.hpp"
#include "gyrocopter/errors.hpp"

namespace gyro {

MeasurementWindow::MeasurementWindow(double max_gap, std::vector<RssiSample> samples)
    : max_gap_(max_gap), samples_(std::move(samples)) {
    if (!(max_gap_ > 0.0)) throw DomainError("max_gap must be > 0");
}

RollingWindow::RollingWindow(std::size_t capacity, double max_gap) : capacity_(capacity), max_gap_(max_gap) {
    if (capacity_ < 2) throw DomainError("window capacity must be >= 2");
    if (!(max_gap_ > 0.0)) throw DomainError("max_gap must be > 0");
}

void RollingWindow::push(const RssiSample& sample) {
    if (!samples_.empty() && !(sample.time > samples_.back().time && sample.time - samples_.back().time <= max_gap_))
        samples_.clear();
    samples_.push_back(sample);
    if (samples_.size() > capacity_) samples_.pop_front();
}

MeasurementWindow RollingWindow::window() const {
    return MeasurementWindow(max_gap_, std::vector<RssiSample>(samples_.begin(), samples_.end()));
}

DifferentialMeasurement difference_window(const MeasurementWindow& window) {
    const auto& s = window.samples();
    if (s.size() < 2)
        throw WindowError(WindowError::Kind::InsufficientData,
                          fmt::format("window needs at least 2 samples, has {}", s.size()));
    DifferentialMeasurement out;
    out.deltas.resize(static_cast<Eigen::Index>(s.size() - 1));
    out.uav_states.reserve(s.size());
    out.uav_states.push_back(s[0].uav);
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double gap = s[i].time - s[i - 1].time;
        if (!(gap > 0.0))
            throw WindowError(WindowError::Kind::StaleWindow, "window times must be strictly increasing");
        if (gap > window.max_gap())
            throw WindowError(WindowError::Kind::StaleWindow,
                              fmt::format("gap of {} s exceeds maximum {} s", gap, window.max_gap()));
        out.deltas[static_cast<Eigen::Index>(i - 1)] = s[i].rssi - s[i - 1].rssi;
        out.uav_states.push_back(s[i].uav);
    }
    return out;
}

Eigen::VectorXd predicted_deltas(const Vec2& source, const std::vector<UavState>& uav_states,
                                 const GainPattern& pattern) {
    if (uav_states.size() < 2) throw WindowError(WindowError::Kind::InsufficientData, "need at least 2 poses");
    Eigen::VectorXd out(static_cast<Eigen::Index>(uav_states.size() - 1));
    double prev = pattern.gain_db(relative_bearing(source, uav_states[0]));
    for (std::size_t k = 1; k < uav_states.size(); ++k) {
        const double cur = pattern.gain_db(relative_bearing(source, uav_states[k]));
        out[static_cast<Eigen::Index>(k - 1)] = cur - prev;
        prev = cur;
    }
    return out;
}

Eigen::MatrixXd noise_covariance(int m, double sigma) {
    if (m < 2) throw DomainError("noise_covariance needs m >= 2");
    if (!(sigma > 0.0)) throw DomainError("noise_covariance needs sigma > 0");
    const int n = m - 1;
    const double s2 = sigma * sigma;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        cov(i, i) = 2.0 * s2;
        if (i + 1 < n) {
            cov(i, i + 1) = -s2;
            cov(i + 1, i) = -s2;
        }
    }
    return cov;
}

DifferentialLikelihood::DifferentialLikelihood(int m, double sigma) : m_(m), sigma_(sigma) {
    const Eigen::MatrixXd cov = noise_covariance(m, sigma);
    llt_.compute(cov);
    if (llt_.info() != Eigen::Success) throw DomainError("noise covariance is not positive definite");
    const Eigen::MatrixXd l = llt_.matrixL();
    const double log_det = 2.0 * l.diagonal().array().log().sum();
    log_norm_ = -0.5 * ((m - 1) * std::log(kTwoPi) + log_det);
}

double DifferentialLikelihood::log_likelihood_residual(const Eigen::VectorXd& residual) const {
    if (residual.size() != m_ - 1)
        throw std::invalid_argument(
            fmt::format("measurement has {} deltas, likelihood expects {}", residual.size(), m_ - 1));
    const Eigen::VectorXd w = llt_.matrixL().solve(residual);
    return log_norm_ - 0.5 * w.squaredNorm();
}

double DifferentialLikelihood::log_likelihood(const DifferentialMeasurement& meas, const Vec2& source,
                                              const GainPattern& pattern) const {
    if (meas.uav_states.size() != static_cast<std::size_t>(meas.deltas.size()) + 1)
        throw std::invalid_argument("measurement deltas and poses disagree in length");
    if (m_ == 2 && meas.deltas.size() == 1) {
        const double predicted = pattern.gain_db(relative_bearing(source, meas.uav_states[1])) -
                                 pattern.gain_db(relative_bearing(source, meas.uav_states[0]));
        const double r = meas.deltas[0] - predicted;
        return log_norm_ - 0.25 * r * r / (sigma_ * sigma_);
    }
    return log_likelihood_residual(meas.deltas - predicted_deltas(source, meas.uav_states, pattern));
}

double log_likelihood(const DifferentialMeasurement& meas, const SourceState& source, const GainPattern& pattern,
                      double sigma) {
    thread_local std::unique_ptr<DifferentialLikelihood> cached;
    const int m = static_cast<int>(meas.uav_states.size());
    if (!cached || cached->window_size() != m || cached->sigma() != sigma)
        cached = std::make_unique<DifferentialLikelihood>(m, sigma);
    return cached->log_likelihood(meas, source.horizontal(), pattern);
}

}  // namespace gyro
