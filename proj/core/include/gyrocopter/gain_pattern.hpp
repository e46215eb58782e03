#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gyro {

struct GainSample {
    double angle;  ///< radians
    double gain;   ///< dB
};

/// Azimuth-only receive gain of the directional antenna.
///
/// Two forms: a parametric cosine model G(phi) = G_f - (R_fb / 2)(1 - cos phi), and a
/// table of (angle, gain) samples interpolated linearly with wraparound at 2pi.
/// Both are 2pi-periodic in phi.
class GainPattern {
public:
    enum class Kind { Parametric, Tabulated };

    static GainPattern parametric(double boresight_gain_db, double front_to_back_db);
    /// Samples must start at angle 0, be strictly increasing and stay below 2pi.
    static GainPattern tabulated(std::vector<GainSample> samples);

    /// Two-element reflector array times a half-wave dipole element, tabulated every
    /// `step_deg`. The element factor puts nulls at +/-90 deg, which are floored at
    /// `null_depth_db` below boresight. Front-to-back equals `front_to_back_db` exactly.
    static GainPattern h_antenna(double boresight_gain_db = 6.15, double front_to_back_db = 10.0,
                                 double null_depth_db = 20.0, double step_deg = 5.0);

    /// Reads `angle_deg,gain_db` CSV (header required, first angle 0, ascending).
    static GainPattern load_csv(const std::string& path);
    static GainPattern parse_csv(std::istream& in, const std::string& source_name = "<stream>");
    void write_csv(std::ostream& out) const;

    Kind kind() const { return kind_; }
    double boresight_gain() const { return boresight_gain_; }
    double front_to_back() const { return front_to_back_; }
    const std::vector<GainSample>& samples() const { return samples_; }

    double gain_db(double phi) const;
    double slope_db_per_rad(double phi) const;

private:
    GainPattern() = default;

    Kind kind_ = Kind::Parametric;
    double boresight_gain_ = 0.0;
    double front_to_back_ = 0.0;
    std::vector<GainSample> samples_;
};

inline double gain_db(const GainPattern& pattern, double phi) { return pattern.gain_db(phi); }
inline double gain_slope_db_per_rad(const GainPattern& pattern, double phi) {
    return pattern.slope_db_per_rad(phi);
}

}  // namespace gyro
