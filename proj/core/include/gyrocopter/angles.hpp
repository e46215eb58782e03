#pragma once

#include <cmath>
#include <numbers>

namespace gyro {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps to [0, 2pi).
inline double wrap_two_pi(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod can return exactly 2pi after the shift for tiny negative inputs
    if (w >= kTwoPi) w = 0.0;
    return w;
}

/// Wraps to (-pi, pi].
inline double wrap_pi(double angle) {
    double w = wrap_two_pi(angle);
    if (w > kPi) w -= kTwoPi;
    return w;
}

}  // namespace gyro
