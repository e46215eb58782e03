#include "gyrocopter/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "gyrocopter/angles.hpp"
#include "gyrocopter/errors.hpp"
#include "gyrocopter/rng.hpp"

namespace gyro {

namespace {

constexpr double kHullTolerance = 1e-9;

}  // namespace

TerrainGrid::TerrainGrid(Vec2 origin, double cell_size, int rows, int cols, std::vector<double> heights)
    : origin_(std::move(origin)), cell_size_(cell_size), rows_(rows), cols_(cols), heights_(std::move(heights)) {
    if (!(cell_size_ > 0.0)) throw DomainError("terrain cell size must be > 0");
    if (rows_ < 2 || cols_ < 2) throw DomainError("terrain grid needs at least 2x2 nodes");
    if (heights_.size() != static_cast<std::size_t>(rows_) * cols_)
        throw DomainError("terrain heights must have rows*cols entries");
    for (double h : heights_)
        if (!std::isfinite(h)) throw DomainError("terrain heights must be finite");
}

TerrainGrid TerrainGrid::load_esri_ascii(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open terrain raster");
    return parse_esri_ascii(in, path);
}

TerrainGrid TerrainGrid::parse_esri_ascii(std::istream& in, const std::string& source_name) {
    std::map<std::string, double> header;
    static const char* kKeys[] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"};
    std::string line;
    int line_no = 0;
    while (header.size() < 6 && std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        double value = 0.0;
        if (!(ls >> key)) continue;
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
            throw ConfigError(fmt::format("{}:{}", source_name, line_no), "unexpected header key '" + key + "'");
        if (!(ls >> value)) throw ConfigError(fmt::format("{}:{}", source_name, line_no), "missing header value");
        header[key] = value;
    }
    if (header.size() < 6) throw ConfigError(source_name, "incomplete ESRI ASCII header");

    const int cols = static_cast<int>(header["ncols"]);
    const int rows = static_cast<int>(header["nrows"]);
    const double cell = header["cellsize"];
    const double nodata = header["nodata_value"];
    if (cols < 2 || rows < 2 || !(cell > 0.0)) throw ConfigError(source_name, "invalid raster dimensions");

    std::vector<double> file_order;
    file_order.reserve(static_cast<std::size_t>(rows) * cols);
    double v = 0.0;
    while (in >> v) file_order.push_back(v);
    if (!in.eof()) throw ConfigError(source_name, "non-numeric value in raster body");
    if (file_order.size() != static_cast<std::size_t>(rows) * cols)
        throw ConfigError(source_name, fmt::format("expected {} values, found {}", rows * cols, file_order.size()));

    double lowest = std::numeric_limits<double>::infinity();
    for (double h : file_order)
        if (h != nodata) lowest = std::min(lowest, h);
    if (!std::isfinite(lowest)) throw ConfigError(source_name, "raster has no valid cells");

    // file rows run north to south; stored rows run south to north
    std::vector<double> heights(file_order.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double h = file_order[static_cast<std::size_t>(r) * cols + c];
            heights[static_cast<std::size_t>(rows - 1 - r) * cols + c] = h == nodata ? lowest : h;
        }
    const Vec2 origin(header["xllcorner"] + 0.5 * cell, header["yllcorner"] + 0.5 * cell);
    return TerrainGrid(origin, cell, rows, cols, std::move(heights));
}

TerrainGrid TerrainGrid::synthetic(const Bounds& bounds, double cell_size, double relief_m, std::uint64_t seed) {
    if (!(bounds.width() > 0.0 && bounds.height() > 0.0)) throw DomainError("terrain bounds must be non-degenerate");
    if (!(cell_size > 0.0)) throw DomainError("terrain cell size must be > 0");
    if (!(relief_m >= 0.0)) throw DomainError("terrain relief must be >= 0");

    struct Wave {
        double kx, ky, phase, amp;
    };
    Rng rng(derive_seed(seed, "terrain"));
    std::vector<Wave> waves;
    constexpr int kWaves = 6;
    double amp_total = 0.0;
    for (int i = 0; i < kWaves; ++i) {
        const double wavelength = rng.uniform(150.0, 700.0);
        const double dir = rng.uniform(0.0, kTwoPi);
        const double k = kTwoPi / wavelength;
        const double amp = rng.uniform(0.5, 1.0) * wavelength / 700.0;
        waves.push_back({k * std::cos(dir), k * std::sin(dir), rng.uniform(0.0, kTwoPi), amp});
        amp_total += amp;
    }
    const int cols = static_cast<int>(std::ceil(bounds.width() / cell_size)) + 1;
    const int rows = static_cast<int>(std::ceil(bounds.height() / cell_size)) + 1;
    std::vector<double> heights(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double x = bounds.x_min + c * cell_size;
            const double y = bounds.y_min + r * cell_size;
            double s = 0.0;
            for (const auto& w : waves) s += w.amp * std::sin(w.kx * x + w.ky * y + w.phase);
            // s in [-amp_total, amp_total] -> [0, relief]
            heights[static_cast<std::size_t>(r) * cols + c] = 0.5 * relief_m * (1.0 + s / amp_total);
        }
    return TerrainGrid(Vec2(bounds.x_min, bounds.y_min), cell_size, rows, cols, std::move(heights));
}

bool TerrainGrid::contains(const Vec2& p) const {
    const double fx = (p.x() - origin_.x()) / cell_size_;
    const double fy = (p.y() - origin_.y()) / cell_size_;
    return fx >= -kHullTolerance && fy >= -kHullTolerance && fx <= cols_ - 1 + kHullTolerance &&
           fy <= rows_ - 1 + kHullTolerance;
}

double TerrainGrid::height_at(const Vec2& p) const {
    if (!contains(p))
        throw OutOfBoundsError(fmt::format("point ({}, {}) outside terrain hull", p.x(), p.y()));
    return interpolate((p.x() - origin_.x()) / cell_size_, (p.y() - origin_.y()) / cell_size_);
}

double TerrainGrid::height_clamped(const Vec2& p) const {
    const double fx = std::clamp((p.x() - origin_.x()) / cell_size_, 0.0, static_cast<double>(cols_ - 1));
    const double fy = std::clamp((p.y() - origin_.y()) / cell_size_, 0.0, static_cast<double>(rows_ - 1));
    return interpolate(fx, fy);
}

double TerrainGrid::interpolate(double fx, double fy) const {
    fx = std::clamp(fx, 0.0, static_cast<double>(cols_ - 1));
    fy = std::clamp(fy, 0.0, static_cast<double>(rows_ - 1));
    const int c0 = std::min(static_cast<int>(fx), cols_ - 2);
    const int r0 = std::min(static_cast<int>(fy), rows_ - 2);
    const double tx = fx - c0;
    const double ty = fy - r0;
    const double h00 = node(r0, c0), h01 = node(r0, c0 + 1);
    const double h10 = node(r0 + 1, c0), h11 = node(r0 + 1, c0 + 1);
    return (1 - ty) * ((1 - tx) * h00 + tx * h01) + ty * ((1 - tx) * h10 + tx * h11);
}

void TerrainGrid::write_esri_ascii(std::ostream& out) const {
    out << fmt::format("ncols {}\nnrows {}\nxllcorner {}\nyllcorner {}\ncellsize {}\nNODATA_value -9999\n", cols_,
                       rows_, origin_.x() - 0.5 * cell_size_, origin_.y() - 0.5 * cell_size_, cell_size_);
    for (int r = rows_ - 1; r >= 0; --r) {
        for (int c = 0; c < cols_; ++c) out << (c ? " " : "") << fmt::format("{}", node(r, c));
        out << '\n';
    }
}

}  // namespace gyro
