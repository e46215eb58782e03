#include "gyrocopter/gain_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "gyrocopter/angles.hpp"
#include "gyrocopter/errors.hpp"

namespace gyro {

namespace {

constexpr double kSlopeStep = 1e-4;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

GainPattern GainPattern::parametric(double boresight_gain_db, double front_to_back_db) {
    if (!std::isfinite(boresight_gain_db)) throw DomainError("boresight gain must be finite");
    if (!(front_to_back_db >= 0.0) || !std::isfinite(front_to_back_db))
        throw DomainError("front-to-back ratio must be finite and >= 0");
    GainPattern p;
    p.kind_ = Kind::Parametric;
    p.boresight_gain_ = boresight_gain_db;
    p.front_to_back_ = front_to_back_db;
    return p;
}

GainPattern GainPattern::tabulated(std::vector<GainSample> samples) {
    if (samples.size() < 2) throw DomainError("tabulated pattern needs at least two samples");
    if (samples.front().angle != 0.0) throw DomainError("tabulated pattern must start at angle 0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].gain) || !std::isfinite(samples[i].angle))
            throw DomainError("tabulated pattern values must be finite");
        if (i > 0 && !(samples[i].angle > samples[i - 1].angle))
            throw DomainError("tabulated pattern angles must be strictly increasing");
    }
    if (!(samples.back().angle < kTwoPi)) throw DomainError("tabulated pattern angles must be below 2pi");
    GainPattern p;
    p.kind_ = Kind::Tabulated;
    p.samples_ = std::move(samples);
    p.boresight_gain_ = p.gain_db(0.0);
    p.front_to_back_ = p.boresight_gain_ - p.gain_db(kPi);
    return p;
}

GainPattern GainPattern::h_antenna(double boresight_gain_db, double front_to_back_db, double null_depth_db,
                                   double step_deg) {
    if (!(front_to_back_db > 0.0)) throw DomainError("h_antenna front-to-back must be > 0");
    if (!(null_depth_db > 0.0)) throw DomainError("h_antenna null depth must be > 0");
    if (!(step_deg > 0.0) || std::fmod(360.0, step_deg) != 0.0)
        throw DomainError("h_antenna step must divide 360 degrees");

    // reflector coupling from the field ratio (1 + rho) / (1 - rho) = 10^(fb/20)
    const double ratio = std::pow(10.0, front_to_back_db / 20.0);
    const double rho = (ratio - 1.0) / (ratio + 1.0);
    auto field = [rho](double phi) {
        const std::complex<double> af =
            1.0 + rho * std::polar(1.0, 0.5 * kPi * std::cos(phi) - 0.5 * kPi);
        const double c = std::cos(phi);
        const double element = std::abs(c) < 1e-12 ? 0.0 : std::abs(std::cos(0.5 * kPi * std::sin(phi)) / c);
        return std::abs(af) * element;
    };
    const double ref = 20.0 * std::log10(field(0.0));
    const double floor_db = boresight_gain_db - null_depth_db;

    const int n = static_cast<int>(std::lround(360.0 / step_deg));
    std::vector<GainSample> samples;
    samples.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double phi = deg2rad(i * step_deg);
        const double f = field(phi);
        const double g = f > 0.0 ? 20.0 * std::log10(f) - ref + boresight_gain_db : floor_db;
        samples.push_back({phi, std::max(g, floor_db)});
    }
    return tabulated(std::move(samples));
}

GainPattern GainPattern::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open gain pattern file");
    return parse_csv(in, path);
}

GainPattern GainPattern::parse_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    std::vector<GainSample> samples;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const std::string where = fmt::format("{}:{}", source_name, line_no);
        if (!header_seen) {
            if (line != "angle_deg,gain_db") throw ConfigError(where, "expected header 'angle_deg,gain_db'");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string a, g;
        if (!std::getline(row, a, ',') || !std::getline(row, g))
            throw ConfigError(where, "expected two comma-separated values");
        try {
            std::size_t pa = 0, pg = 0;
            const double angle = std::stod(a, &pa);
            const double gain = std::stod(g, &pg);
            if (trim(a.substr(pa)).size() || trim(g.substr(pg)).size()) throw std::invalid_argument("trailing");
            samples.push_back({deg2rad(angle), gain});
        } catch (const std::logic_error&) {
            throw ConfigError(where, "malformed number");
        }
    }
    if (!header_seen) throw ConfigError(source_name, "empty gain pattern file");
    try {
        return tabulated(std::move(samples));
    } catch (const DomainError& e) {
        throw ConfigError(source_name, e.what());
    }
}

void GainPattern::write_csv(std::ostream& out) const {
    out << "angle_deg,gain_db\n";
    if (kind_ == Kind::Tabulated) {
        for (const auto& s : samples_) out << fmt::format("{},{}\n", rad2deg(s.angle), s.gain);
        return;
    }
    for (int deg = 0; deg < 360; ++deg) out << fmt::format("{},{}\n", deg, gain_db(deg2rad(deg)));
}

double GainPattern::gain_db(double phi) const {
    if (kind_ == Kind::Parametric) {
        return boresight_gain_ - 0.5 * front_to_back_ * (1.0 - std::cos(phi));
    }
    const double a = wrap_two_pi(phi);
    auto hi = std::upper_bound(samples_.begin(), samples_.end(), a,
                               [](double v, const GainSample& s) { return v < s.angle; });
    const GainSample& left = *(hi - 1);
    const double right_angle = hi == samples_.end() ? kTwoPi : hi->angle;
    const double right_gain = hi == samples_.end() ? samples_.front().gain : hi->gain;
    const double t = (a - left.angle) / (right_angle - left.angle);
    return left.gain + t * (right_gain - left.gain);
}

double GainPattern::slope_db_per_rad(double phi) const {
    if (kind_ == Kind::Parametric) return -0.5 * front_to_back_ * std::sin(phi);
    return (gain_db(phi + kSlopeStep) - gain_db(phi - kSlopeStep)) / (2.0 * kSlopeStep);
}

}  // namespace gyro
