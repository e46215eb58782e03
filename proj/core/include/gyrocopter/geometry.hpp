#pragma once

#include <Eigen/Core>

#include "gyrocopter/angles.hpp"

namespace gyro {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Sensor platform pose. Heading is world-frame, clockwise from +y, kept in [0, 2pi).
class UavState {
public:
    UavState() = default;
    UavState(const Vec3& position, double heading);

    const Vec3& position() const { return position_; }
    Vec2 horizontal() const { return position_.head<2>(); }
    double heading() const { return heading_; }

    void set_position(const Vec3& position);
    void set_heading(double heading);

private:
    Vec3 position_ = Vec3::Zero();
    double heading_ = 0.0;
};

/// Radio source location.
class SourceState {
public:
    SourceState() = default;
    explicit SourceState(const Vec3& position);
    SourceState(double x, double y, double z = 0.0) : SourceState(Vec3(x, y, z)) {}

    const Vec3& position() const { return position_; }
    Vec2 horizontal() const { return position_.head<2>(); }

private:
    Vec3 position_ = Vec3::Zero();
};

/// Axis-aligned rectangle in the horizontal plane.
struct Bounds {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    Vec2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
    bool contains(const Vec2& p) const {
        return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
    }
    Vec2 clamp(const Vec2& p) const;
};

/// Bearing of the source in the sensor frame: atan2(dx, dy) - heading, wrapped to [0, 2pi).
/// Throws GeometryError when the horizontal positions coincide.
double relative_bearing(const Vec2& source, const UavState& uav);
inline double relative_bearing(const SourceState& source, const UavState& uav) {
    return relative_bearing(source.horizontal(), uav);
}

/// World-frame bearing from `from` to `to`, clockwise from +y, in [0, 2pi).
double world_bearing(const Vec2& from, const Vec2& to);

/// Gradient of the relative bearing with respect to the source's horizontal position.
Vec2 bearing_gradient(const Vec2& source, const UavState& uav);

}  // namespace gyro
