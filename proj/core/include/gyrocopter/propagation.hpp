#pragma once

#include <memory>
#include <optional>

#include "gyrocopter/gain_pattern.hpp"
#include "gyrocopter/geometry.hpp"
#include "gyrocopter/rng.hpp"
#include "gyrocopter/terrain.hpp"

namespace gyro {

/// Log-distance path-loss parameters plus receiver noise and pulse cadence.
struct RadioModel {
    double ref_power = 20.0;    ///< dBm at ref_distance
    double ref_distance = 1.0;  ///< m
    double path_loss_exp = 3.0;
    double noise_std = 2.0;     ///< dB
    double pulse_period = 1.0;  ///< s

    /// Throws DomainError on a violated invariant.
    void validate() const;
};

/// Everything between transmitter and receiver besides free-space decay.
struct EnvironmentModel {
    std::shared_ptr<const TerrainGrid> terrain;  ///< optional
    double extra_loss = 0.0;                     ///< dB, constant unknown attenuation
    double carrier_freq = 0.15;                  ///< GHz
    double detection_prob = 1.0;

    void validate() const;
};

/// Noiseless terrain-free RSSI: P_ref - 10 n log10(d / d0) + G(phi).
double mean_rssi(const RadioModel& model, const GainPattern& pattern, const SourceState& source,
                 const UavState& uav);

/// First Fresnel zone radius in metres; distances in km, frequency in GHz.
double fresnel_radius(double d1_km, double d2_km, double freq_ghz, double total_km);

/// Single knife-edge diffraction loss over the terrain, >= 0 dB. Returns 0 without terrain.
/// The line tx->rx is sampled at every grid-line crossing; the sample with the smallest
/// clearance-to-Fresnel ratio h/F1 sets the loss -20 h/F1 + 10, clamped at 0.
double terrain_loss(const EnvironmentModel& env, const Vec3& tx, const Vec3& rx);

/// One pulse as seen by the receiver, or nullopt when the pulse is not detected.
std::optional<double> synthesize_rssi(const RadioModel& model, const GainPattern& pattern,
                                      const EnvironmentModel& env, const SourceState& source, const UavState& uav,
                                      Rng& rng);

}  // namespace gyro
