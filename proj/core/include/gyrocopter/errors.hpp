#pragma once

#include <stdexcept>
#include <string>

namespace gyro {

/// Source and sensor positions that leave a bearing or distance undefined.
class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Query point outside the terrain raster.
class OutOfBoundsError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Measurement window that cannot be differenced (too short, or spans a gap).
class WindowError : public std::runtime_error {
public:
    enum class Kind { InsufficientData, StaleWindow };
    WindowError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Malformed configuration or input file. `field` names the offending key or line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace gyro
