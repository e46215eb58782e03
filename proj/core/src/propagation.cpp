#include "gyrocopter/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gyrocopter/errors.hpp"

namespace gyro {

void RadioModel::validate() const {
    if (!std::isfinite(ref_power)) throw DomainError("ref_power must be finite");
    if (!(ref_distance > 0.0)) throw DomainError("ref_distance must be > 0");
    if (!(path_loss_exp > 0.0)) throw DomainError("path_loss_exp must be > 0");
    if (!(noise_std >= 0.0)) throw DomainError("noise_std must be >= 0");
    if (!(pulse_period > 0.0)) throw DomainError("pulse_period must be > 0");
}

void EnvironmentModel::validate() const {
    if (!(carrier_freq > 0.0)) throw DomainError("carrier_freq must be > 0");
    if (!(detection_prob >= 0.0 && detection_prob <= 1.0)) throw DomainError("detection_prob must be in [0, 1]");
    if (!std::isfinite(extra_loss)) throw DomainError("extra_loss must be finite");
}

double mean_rssi(const RadioModel& model, const GainPattern& pattern, const SourceState& source,
                 const UavState& uav) {
    const double d = (source.position() - uav.position()).norm();
    if (!(d > 0.0)) throw GeometryError("path loss undefined at zero distance");
    const double phi = relative_bearing(source, uav);
    return model.ref_power - 10.0 * model.path_loss_exp * std::log10(d / model.ref_distance) + pattern.gain_db(phi);
}

double fresnel_radius(double d1_km, double d2_km, double freq_ghz, double total_km) {
    if (!(d1_km > 0.0) || !(d2_km > 0.0) || !(freq_ghz > 0.0) || !(total_km > 0.0))
        throw DomainError("fresnel_radius arguments must be > 0");
    return 17.3 * std::sqrt(d1_km * d2_km / (freq_ghz * total_km));
}

double terrain_loss(const EnvironmentModel& env, const Vec3& tx, const Vec3& rx) {
    if (!env.terrain) return 0.0;
    const TerrainGrid& grid = *env.terrain;
    if (!grid.contains(tx.head<2>()) || !grid.contains(rx.head<2>()))
        throw OutOfBoundsError("terrain_loss endpoint outside terrain hull");
    const double length_m = (rx - tx).norm();
    if (!(length_m > 0.0)) throw GeometryError("terrain_loss needs distinct endpoints");

    // parameters t in (0, 1) where the horizontal projection crosses a grid line
    std::vector<double> ts;
    const double cell = grid.cell_size();
    auto add_crossings = [&](double a0, double a1, double origin) {
        if (a0 == a1) return;
        const double lo = std::min(a0, a1), hi = std::max(a0, a1);
        for (double k = std::floor((lo - origin) / cell) + 1.0; origin + k * cell < hi; k += 1.0) {
            const double t = (origin + k * cell - a0) / (a1 - a0);
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    };
    add_crossings(tx.x(), rx.x(), grid.origin().x());
    add_crossings(tx.y(), rx.y(), grid.origin().y());
    if (ts.empty()) ts.push_back(0.5);

    const double total_km = length_m / 1000.0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (const double t : ts) {
        const Vec3 p = tx + t * (rx - tx);
        const double clearance = p.z() - grid.height_clamped(p.head<2>());
        const double f1 = fresnel_radius(t * total_km, (1.0 - t) * total_km, env.carrier_freq, total_km);
        worst_ratio = std::min(worst_ratio, clearance / f1);
    }
    return std::max(-20.0 * worst_ratio + 10.0, 0.0);
}

std::optional<double> synthesize_rssi(const RadioModel& model, const GainPattern& pattern,
                                      const EnvironmentModel& env, const SourceState& source, const UavState& uav,
                                      Rng& rng) {
    if (!rng.bernoulli(env.detection_prob)) return std::nullopt;
    const double mean = mean_rssi(model, pattern, source, uav);
    const double loss = terrain_loss(env, source.position(), uav.position());
    return mean - loss - env.extra_loss + rng.normal(0.0, model.noise_std);
}

}  // namespace gyro
