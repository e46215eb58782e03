#pragma once

#include <deque>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "gyrocopter/gain_pattern.hpp"
#include "gyrocopter/geometry.hpp"

namespace gyro {

struct RssiSample {
    double time;  ///< s
    double rssi;  ///< dBm
    UavState uav;
};

/// Consecutive RSSI samples of one source with the poses they were taken at.
class MeasurementWindow {
public:
    explicit MeasurementWindow(double max_gap, std::vector<RssiSample> samples = {});

    double max_gap() const { return max_gap_; }
    const std::vector<RssiSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }

private:
    double max_gap_;
    std::vector<RssiSample> samples_;
};

/// Fixed-capacity sliding window fed one detection at a time. A detection arriving more
/// than `max_gap` after the previous one restarts the window.
class RollingWindow {
public:
    RollingWindow(std::size_t capacity, double max_gap);

    void push(const RssiSample& sample);
    void clear() { samples_.clear(); }
    bool full() const { return samples_.size() == capacity_; }
    std::size_t capacity() const { return capacity_; }
    MeasurementWindow window() const;

private:
    std::size_t capacity_;
    double max_gap_;
    std::deque<RssiSample> samples_;
};

/// Successive RSSI differences and the poses behind them.
struct DifferentialMeasurement {
    Eigen::VectorXd deltas;
    std::vector<UavState> uav_states;

    std::size_t window_size() const { return uav_states.size(); }
};

/// deltas[i] = rssi[i+1] - rssi[i]. Throws WindowError for m < 2 or an oversized gap.
DifferentialMeasurement difference_window(const MeasurementWindow& window);

/// Noiseless differential prediction G(phi_k) - G(phi_{k-1}) with the source held fixed.
Eigen::VectorXd predicted_deltas(const Vec2& source, const std::vector<UavState>& uav_states,
                                 const GainPattern& pattern);

/// Covariance of differenced i.i.d. noise: 2 sigma^2 on the diagonal, -sigma^2 beside it.
Eigen::MatrixXd noise_covariance(int m, double sigma);

/// Gaussian likelihood of a differential measurement. The covariance factorization for
/// (m, sigma) is done once at construction.
class DifferentialLikelihood {
public:
    DifferentialLikelihood(int m, double sigma);

    int window_size() const { return m_; }
    double sigma() const { return sigma_; }
    /// log density at zero residual
    double log_normalizer() const { return log_norm_; }

    double log_likelihood(const DifferentialMeasurement& meas, const Vec2& source,
                          const GainPattern& pattern) const;
    double log_likelihood_residual(const Eigen::VectorXd& residual) const;

private:
    int m_;
    double sigma_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_norm_;
};

/// Convenience wrapper; reuses a per-thread factorization for repeated (m, sigma).
double log_likelihood(const DifferentialMeasurement& meas, const SourceState& source, const GainPattern& pattern,
                      double sigma);

}  // namespace gyro
