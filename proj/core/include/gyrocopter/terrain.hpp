#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gyrocopter/geometry.hpp"

namespace gyro {

/// Regular elevation raster. Node (row, col) sits at origin + (col, row) * cell_size;
/// row 0 is the southern edge. Heights are bilinearly interpolated inside the hull.
class TerrainGrid {
public:
    TerrainGrid(Vec2 origin, double cell_size, int rows, int cols, std::vector<double> heights);

    /// ESRI ASCII raster (ncols, nrows, xllcorner, yllcorner, cellsize, NODATA_value).
    /// Cell values are placed at cell centres; NODATA cells take the lowest valid height.
    static TerrainGrid load_esri_ascii(const std::string& path);
    static TerrainGrid parse_esri_ascii(std::istream& in, const std::string& source_name = "<stream>");

    /// Rolling hills: sum of seeded 2-D sinusoids covering `bounds`, heights >= 0.
    static TerrainGrid synthetic(const Bounds& bounds, double cell_size, double relief_m, std::uint64_t seed);

    const Vec2& origin() const { return origin_; }
    double cell_size() const { return cell_size_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double node(int row, int col) const { return heights_[static_cast<std::size_t>(row) * cols_ + col]; }

    bool contains(const Vec2& p) const;
    /// Throws OutOfBoundsError outside the hull.
    double height_at(const Vec2& p) const;
    /// Same as height_at but clamps the query into the hull.
    double height_clamped(const Vec2& p) const;

    void write_esri_ascii(std::ostream& out) const;

private:
    double interpolate(double fx, double fy) const;

    Vec2 origin_;
    double cell_size_;
    int rows_;
    int cols_;
    std::vector<double> heights_;
};

}  // namespace gyro
