#include "gyrocopter/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "gyrocopter/errors.hpp"

namespace gyro {

namespace {

void require_finite(const Vec3& p, const char* what) {
    if (!p.allFinite()) throw DomainError(std::string(what) + " position must be finite");
}

}  // namespace

UavState::UavState(const Vec3& position, double heading) {
    set_position(position);
    set_heading(heading);
}

void UavState::set_position(const Vec3& position) {
    require_finite(position, "uav");
    position_ = position;
}

void UavState::set_heading(double heading) {
    if (!std::isfinite(heading)) throw DomainError("uav heading must be finite");
    heading_ = wrap_two_pi(heading);
}

SourceState::SourceState(const Vec3& position) : position_(position) {
    require_finite(position, "source");
}

Vec2 Bounds::clamp(const Vec2& p) const {
    return {std::clamp(p.x(), x_min, x_max), std::clamp(p.y(), y_min, y_max)};
}

double world_bearing(const Vec2& from, const Vec2& to) {
    const double dx = to.x() - from.x();
    const double dy = to.y() - from.y();
    if (dx == 0.0 && dy == 0.0) throw GeometryError("bearing undefined for coincident horizontal positions");
    return wrap_two_pi(std::atan2(dx, dy));
}

double relative_bearing(const Vec2& source, const UavState& uav) {
    const double dx = source.x() - uav.position().x();
    const double dy = source.y() - uav.position().y();
    if (dx == 0.0 && dy == 0.0) throw GeometryError("bearing undefined for coincident horizontal positions");
    return wrap_two_pi(std::atan2(dx, dy) - uav.heading());
}

Vec2 bearing_gradient(const Vec2& source, const UavState& uav) {
    const double dx = source.x() - uav.position().x();
    const double dy = source.y() - uav.position().y();
    const double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) throw GeometryError("bearing gradient undefined for coincident horizontal positions");
    return {dy / d2, -dx / d2};
}

}  // namespace gyro
