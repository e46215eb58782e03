#include "gyrocopter/scenario.hpp"

#include <fstream>
#include <functional>
#include <set>

#include <fmt/format.h>

#include "gyrocopter/errors.hpp"

namespace gyro {

using nlohmann::json;

std::string to_string(Method m) {
    switch (m) {
        case Method::Gyro: return "gyro";
        case Method::DualAntenna: return "dual_antenna";
        case Method::RotateBearing: return "rotate_bearing";
        case Method::RssiIdeal: return "rssi_ideal";
    }
    return "unknown";
}

std::string to_string(PlannerMode m) { return m == PlannerMode::Discretized ? "discrete" : "continuous"; }

Method parse_method(const std::string& name) {
    if (name == "gyro") return Method::Gyro;
    if (name == "dual_antenna") return Method::DualAntenna;
    if (name == "rotate_bearing") return Method::RotateBearing;
    if (name == "rssi_ideal") return Method::RssiIdeal;
    throw ConfigError("method", "unknown method '" + name + "' (gyro, dual_antenna, rotate_bearing, rssi_ideal)");
}

PlannerMode parse_planner_mode(const std::string& name) {
    if (name == "discrete" || name == "discretized") return PlannerMode::Discretized;
    if (name == "continuous") return PlannerMode::Continuous;
    throw ConfigError("planner.mode", "unknown planner '" + name + "' (discrete, continuous)");
}

namespace {

/// Walks one JSON object, tracking the dotted path for diagnostics.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }
    const json& at(const std::string& key) const { return j_.at(key); }

    void number(const std::string& key, double& out) const {
        if (!has(key)) return;
        if (!j_.at(key).is_number()) throw ConfigError(field(key), "expected a number");
        out = j_.at(key).get<double>();
    }
    void integer(const std::string& key, int& out) const {
        if (!has(key)) return;
        if (!j_.at(key).is_number_integer()) throw ConfigError(field(key), "expected an integer");
        out = j_.at(key).get<int>();
    }
    void u64(const std::string& key, std::uint64_t& out) const {
        if (!has(key)) return;
        if (!j_.at(key).is_number_integer() || j_.at(key).get<long long>() < 0)
            throw ConfigError(field(key), "expected a non-negative integer");
        out = j_.at(key).get<std::uint64_t>();
    }
    void string(const std::string& key, std::string& out) const {
        if (!has(key)) return;
        if (!j_.at(key).is_string()) throw ConfigError(field(key), "expected a string");
        out = j_.at(key).get<std::string>();
    }
    void object(const std::string& key, const std::function<void(const ObjectReader&)>& fn) const {
        if (!has(key)) return;
        ObjectReader sub(j_.at(key), field(key));
        fn(sub);
        sub.finish();
    }
    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) throw ConfigError(field(k), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

void read_radio(const ObjectReader& r, RadioModel& m) {
    r.number("ref_power", m.ref_power);
    r.number("ref_distance", m.ref_distance);
    r.number("path_loss_exp", m.path_loss_exp);
    r.number("noise_std", m.noise_std);
    r.number("pulse_period", m.pulse_period);
}

json radio_json(const RadioModel& m) {
    return {{"ref_power", m.ref_power},
            {"ref_distance", m.ref_distance},
            {"path_loss_exp", m.path_loss_exp},
            {"noise_std", m.noise_std},
            {"pulse_period", m.pulse_period}};
}

void check(bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
}

}  // namespace

void ScenarioConfig::validate() const {
    check(bounds.width() > 0.0 && bounds.height() > 0.0, "bounds", "must be a non-degenerate rectangle");
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (!bounds.contains(sources[i].position))
            throw ConfigError(fmt::format("sources[{}]", i), "source outside bounds");
        for (std::size_t j = 0; j < i; ++j)
            if (sources[j].id == sources[i].id) throw ConfigError(fmt::format("sources[{}].id", i), "duplicate id");
    }
    check(source_sigma_q >= 0.0, "source_sigma_q", "must be >= 0");
    check(source_height >= 0.0, "source_height", "must be >= 0");
    try {
        truth_radio.validate();
    } catch (const DomainError& e) {
        throw ConfigError("truth_radio", e.what());
    }
    try {
        model_radio.validate();
    } catch (const DomainError& e) {
        throw ConfigError("model_radio", e.what());
    }
    check(carrier_freq > 0.0, "environment.carrier_freq", "must be > 0");
    check(detection_prob >= 0.0 && detection_prob <= 1.0, "environment.detection_prob", "must be in [0, 1]");
    try {
        planner.validate();
    } catch (const DomainError& e) {
        throw ConfigError("planner", e.what());
    }
    check(window_m >= 2, "window_m", "must be >= 2");
    check(localized_threshold > 0.0, "localized_threshold", "must be > 0");
    check(mission_timeout > 0.0, "mission_timeout", "must be > 0");
    check(altitude >= 0.0, "altitude", "must be >= 0");
    check(filter.n_particles >= 100, "filter.n_particles", "must be >= 100");
    check(filter.sigma_q >= 0.0, "filter.sigma_q", "must be >= 0");
    check(filter.sigma_db > 0.0, "filter.sigma_db", "must be > 0");
    check(rotate_bearing.rotation_time > 0.0, "rotate_bearing.rotation_time", "must be > 0");
    check(rotate_bearing.bearing_std_deg >= 0.0, "rotate_bearing.bearing_std_deg", "must be >= 0");
    check(rotate_bearing.travel_leg > 0.0, "rotate_bearing.travel_leg", "must be > 0");
    check(crlb.radius > 0.0, "crlb.radius", "must be > 0");
    check(crlb.sample_period > 0.0, "crlb.sample_period", "must be > 0");
    check(crlb.sigma_db > 0.0, "crlb.sigma_db", "must be > 0");
    check(crlb.steps >= 1, "crlb.steps", "must be >= 1");
    check(transect.duration > 0.0, "transect.duration", "must be > 0");
    check(terrain.kind != TerrainSpec::Kind::Synthetic || (terrain.cell_size > 0.0 && terrain.relief >= 0.0),
          "terrain", "synthetic terrain needs cell_size > 0 and relief >= 0");
}

std::shared_ptr<const TerrainGrid> ScenarioConfig::terrain_grid() const {
    if (!terrain_built_) {
        switch (terrain.kind) {
            case TerrainSpec::Kind::None: terrain_cache_.reset(); break;
            case TerrainSpec::Kind::Synthetic:
                terrain_cache_ = std::make_shared<TerrainGrid>(
                    TerrainGrid::synthetic(bounds, terrain.cell_size, terrain.relief, terrain.seed));
                break;
            case TerrainSpec::Kind::File:
                terrain_cache_ = std::make_shared<TerrainGrid>(TerrainGrid::load_esri_ascii(terrain.path));
                break;
        }
        terrain_built_ = true;
    }
    return terrain_cache_;
}

const GainPattern& ScenarioConfig::gain_pattern() const {
    if (!pattern_cache_) {
        try {
            switch (pattern.kind) {
                case PatternSpec::Kind::HAntenna:
                    pattern_cache_ = std::make_shared<GainPattern>(GainPattern::h_antenna(
                        pattern.boresight_gain, pattern.front_to_back, pattern.null_depth, pattern.step_deg));
                    break;
                case PatternSpec::Kind::Parametric:
                    pattern_cache_ = std::make_shared<GainPattern>(
                        GainPattern::parametric(pattern.boresight_gain, pattern.front_to_back));
                    break;
                case PatternSpec::Kind::Tabulated:
                    pattern_cache_ = std::make_shared<GainPattern>(GainPattern::load_csv(pattern.path));
                    break;
            }
        } catch (const DomainError& e) {
            throw ConfigError("pattern", e.what());
        }
    }
    return *pattern_cache_;
}

EnvironmentModel ScenarioConfig::environment() const {
    EnvironmentModel env;
    env.terrain = terrain_grid();
    env.extra_loss = extra_loss;
    env.carrier_freq = carrier_freq;
    env.detection_prob = detection_prob;
    return env;
}

void ScenarioConfig::invalidate_cache() {
    terrain_cache_.reset();
    pattern_cache_.reset();
    terrain_built_ = false;
}

CrlbScenario crlb_scenario(const ScenarioConfig& config) {
    CrlbScenario s;
    s.radius = config.crlb.radius;
    s.revolve_rate = deg2rad(config.crlb.revolve_rate_deg_s);
    s.sample_period = config.crlb.sample_period;
    s.sigma = config.crlb.sigma_db;
    s.steps = config.crlb.steps;
    s.pattern = config.gain_pattern();
    s.validate();
    return s;
}

ScenarioConfig default_scenario() {
    ScenarioConfig c;
    c.terrain.kind = TerrainSpec::Kind::Synthetic;
    c.sources = {{0, {220.0, 760.0}}, {1, {480.0, 310.0}}, {2, {810.0, 840.0}},
                 {3, {720.0, 180.0}}, {4, {360.0, 560.0}}};
    return c;
}

ScenarioConfig convergence_preset() {
    ScenarioConfig c;
    c.terrain.kind = TerrainSpec::Kind::None;
    c.sources = {{0, {500.0, 500.0}}};
    c.source_sigma_q = 0.0;
    return c;
}

ScenarioConfig preset(const std::string& name) {
    if (name == "default") return default_scenario();
    if (name == "field") return field_preset();
    if (name == "convergence") return convergence_preset();
    throw ConfigError("preset", "unknown preset '" + name + "' (expected default, field or convergence)");
}

ScenarioConfig field_preset() {
    ScenarioConfig c;
    c.bounds = {0.0, 0.0, 640.0, 640.0};
    c.terrain.kind = TerrainSpec::Kind::Synthetic;
    c.terrain.seed = 11;
    c.sources = {{0, {120.0, 500.0}}, {1, {330.0, 560.0}}, {2, {520.0, 380.0}}, {3, {280.0, 170.0}}};
    c.source_sigma_q = 0.0;
    c.truth_radio.noise_std = 5.0;
    c.model_radio.noise_std = 5.0;
    c.filter.sigma_db = 5.0;
    c.filter.sigma_q = 1.0;
    c.planner.uav_speed = 5.5;
    c.planner.gyration_rate = deg2rad(40.0);
    c.uav_start = UavState(Vec3(40.0, 40.0, 60.0), 0.0);
    c.mission_timeout = 1200.0;
    return c;
}

ScenarioConfig scenario_from_json(const json& j, const ScenarioConfig& base) {
    ScenarioConfig c = base;
    c.invalidate_cache();
    try {
        ObjectReader r(j, "");
        r.object("bounds", [&](const ObjectReader& b) {
            b.number("x_min", c.bounds.x_min);
            b.number("y_min", c.bounds.y_min);
            b.number("x_max", c.bounds.x_max);
            b.number("y_max", c.bounds.y_max);
        });
        if (r.has("terrain")) {
            r.object("terrain", [&](const ObjectReader& t) {
                std::string kind = "synthetic";
                t.string("kind", kind);
                if (kind == "none") c.terrain.kind = TerrainSpec::Kind::None;
                else if (kind == "synthetic") c.terrain.kind = TerrainSpec::Kind::Synthetic;
                else if (kind == "file") c.terrain.kind = TerrainSpec::Kind::File;
                else throw ConfigError(t.field("kind"), "expected none, synthetic or file");
                t.number("cell_size", c.terrain.cell_size);
                t.number("relief", c.terrain.relief);
                t.u64("seed", c.terrain.seed);
                t.string("path", c.terrain.path);
                if (c.terrain.kind == TerrainSpec::Kind::File && c.terrain.path.empty())
                    throw ConfigError(t.field("path"), "required for file terrain");
            });
        } else if (j.contains("terrain")) {
            c.terrain.kind = TerrainSpec::Kind::None;  // explicit null
        }
        if (r.has("sources")) {
            const json& arr = r.at("sources");
            if (!arr.is_array()) throw ConfigError("sources", "expected an array");
            c.sources.clear();
            for (std::size_t i = 0; i < arr.size(); ++i) {
                ObjectReader s(arr[i], fmt::format("sources[{}]", i));
                SourceSpec spec{static_cast<int>(i), Vec2::Zero()};
                s.integer("id", spec.id);
                if (!s.has("x") || !s.has("y")) throw ConfigError(s.field("x"), "source needs x and y");
                s.number("x", spec.position.x());
                s.number("y", spec.position.y());
                s.finish();
                c.sources.push_back(spec);
            }
        }
        r.number("source_sigma_q", c.source_sigma_q);
        r.number("source_height", c.source_height);
        r.object("truth_radio", [&](const ObjectReader& o) { read_radio(o, c.truth_radio); });
        r.object("model_radio", [&](const ObjectReader& o) { read_radio(o, c.model_radio); });
        r.object("environment", [&](const ObjectReader& o) {
            o.number("extra_loss", c.extra_loss);
            o.number("carrier_freq", c.carrier_freq);
            o.number("detection_prob", c.detection_prob);
        });
        r.object("pattern", [&](const ObjectReader& o) {
            std::string kind = "h_antenna";
            o.string("kind", kind);
            if (kind == "h_antenna") c.pattern.kind = PatternSpec::Kind::HAntenna;
            else if (kind == "parametric") c.pattern.kind = PatternSpec::Kind::Parametric;
            else if (kind == "tabulated") c.pattern.kind = PatternSpec::Kind::Tabulated;
            else throw ConfigError(o.field("kind"), "expected h_antenna, parametric or tabulated");
            o.number("boresight_gain", c.pattern.boresight_gain);
            o.number("front_to_back", c.pattern.front_to_back);
            o.number("null_depth", c.pattern.null_depth);
            o.number("step_deg", c.pattern.step_deg);
            o.string("path", c.pattern.path);
            if (c.pattern.kind == PatternSpec::Kind::Tabulated && c.pattern.path.empty())
                throw ConfigError(o.field("path"), "required for tabulated pattern");
        });
        if (r.has("method")) {
            std::string m;
            r.string("method", m);
            c.method = parse_method(m);
        }
        r.object("planner", [&](const ObjectReader& o) {
            if (o.has("mode")) {
                std::string m;
                o.string("mode", m);
                c.planner.mode = parse_planner_mode(m);
            }
            o.number("uav_speed", c.planner.uav_speed);
            o.number("discrete_action_duration", c.planner.discrete_action_duration);
            o.integer("discrete_heading_count", c.planner.discrete_heading_count);
            o.number("replan_period_continuous", c.planner.replan_period_continuous);
            double rate_deg = rad2deg(c.planner.gyration_rate);
            o.number("gyration_rate_deg_s", rate_deg);
            c.planner.gyration_rate = deg2rad(rate_deg);
        });
        r.integer("window_m", c.window_m);
        r.number("localized_threshold", c.localized_threshold);
        r.number("mission_timeout", c.mission_timeout);
        r.number("altitude", c.altitude);
        r.object("uav_start", [&](const ObjectReader& o) {
            double x = c.uav_start.position().x(), y = c.uav_start.position().y();
            double heading_deg = rad2deg(c.uav_start.heading());
            o.number("x", x);
            o.number("y", y);
            o.number("heading_deg", heading_deg);
            c.uav_start = UavState(Vec3(x, y, c.altitude), deg2rad(heading_deg));
        });
        c.uav_start.set_position(Vec3(c.uav_start.position().x(), c.uav_start.position().y(), c.altitude));
        r.object("filter", [&](const ObjectReader& o) {
            o.integer("n_particles", c.filter.n_particles);
            o.number("sigma_q", c.filter.sigma_q);
            o.number("sigma_db", c.filter.sigma_db);
        });
        r.object("rotate_bearing", [&](const ObjectReader& o) {
            o.number("rotation_time", c.rotate_bearing.rotation_time);
            o.number("bearing_std_deg", c.rotate_bearing.bearing_std_deg);
            o.number("travel_leg", c.rotate_bearing.travel_leg);
        });
        r.object("dual_antenna", [&](const ObjectReader& o) { o.number("offset_db", c.dual_antenna.offset_db); });
        r.object("crlb", [&](const ObjectReader& o) {
            o.number("radius", c.crlb.radius);
            o.number("revolve_rate_deg_s", c.crlb.revolve_rate_deg_s);
            o.number("sample_period", c.crlb.sample_period);
            o.number("sigma_db", c.crlb.sigma_db);
            o.integer("steps", c.crlb.steps);
        });
        r.object("transect", [&](const ObjectReader& o) {
            o.number("start_offset_x", c.transect.start_offset.x());
            o.number("start_offset_y", c.transect.start_offset.y());
            o.number("velocity_x", c.transect.velocity.x());
            o.number("velocity_y", c.transect.velocity.y());
            o.number("duration", c.transect.duration);
        });
        r.finish();
    } catch (const json::exception& e) {
        throw ConfigError("", std::string("invalid JSON value: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::string& path, const ScenarioConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}:byte {}", path, e.byte), e.what());
    }
    return scenario_from_json(j, base);
}

json scenario_to_json(const ScenarioConfig& c) {
    json sources = json::array();
    for (const auto& s : c.sources) sources.push_back({{"id", s.id}, {"x", s.position.x()}, {"y", s.position.y()}});
    json terrain;
    switch (c.terrain.kind) {
        case TerrainSpec::Kind::None: terrain = {{"kind", "none"}}; break;
        case TerrainSpec::Kind::Synthetic:
            terrain = {{"kind", "synthetic"},
                       {"cell_size", c.terrain.cell_size},
                       {"relief", c.terrain.relief},
                       {"seed", c.terrain.seed}};
            break;
        case TerrainSpec::Kind::File: terrain = {{"kind", "file"}, {"path", c.terrain.path}}; break;
    }
    json pattern;
    switch (c.pattern.kind) {
        case PatternSpec::Kind::HAntenna:
            pattern = {{"kind", "h_antenna"},
                       {"boresight_gain", c.pattern.boresight_gain},
                       {"front_to_back", c.pattern.front_to_back},
                       {"null_depth", c.pattern.null_depth},
                       {"step_deg", c.pattern.step_deg}};
            break;
        case PatternSpec::Kind::Parametric:
            pattern = {{"kind", "parametric"},
                       {"boresight_gain", c.pattern.boresight_gain},
                       {"front_to_back", c.pattern.front_to_back}};
            break;
        case PatternSpec::Kind::Tabulated: pattern = {{"kind", "tabulated"}, {"path", c.pattern.path}}; break;
    }
    return {
        {"bounds", {{"x_min", c.bounds.x_min}, {"y_min", c.bounds.y_min}, {"x_max", c.bounds.x_max}, {"y_max", c.bounds.y_max}}},
        {"terrain", terrain},
        {"sources", sources},
        {"source_sigma_q", c.source_sigma_q},
        {"source_height", c.source_height},
        {"truth_radio", radio_json(c.truth_radio)},
        {"model_radio", radio_json(c.model_radio)},
        {"environment", {{"extra_loss", c.extra_loss}, {"carrier_freq", c.carrier_freq}, {"detection_prob", c.detection_prob}}},
        {"pattern", pattern},
        {"method", to_string(c.method)},
        {"planner",
         {{"mode", to_string(c.planner.mode)},
          {"uav_speed", c.planner.uav_speed},
          {"discrete_action_duration", c.planner.discrete_action_duration},
          {"discrete_heading_count", c.planner.discrete_heading_count},
          {"replan_period_continuous", c.planner.replan_period_continuous},
          {"gyration_rate_deg_s", rad2deg(c.planner.gyration_rate)}}},
        {"window_m", c.window_m},
        {"localized_threshold", c.localized_threshold},
        {"mission_timeout", c.mission_timeout},
        {"altitude", c.altitude},
        {"uav_start",
         {{"x", c.uav_start.position().x()}, {"y", c.uav_start.position().y()}, {"heading_deg", rad2deg(c.uav_start.heading())}}},
        {"filter", {{"n_particles", c.filter.n_particles}, {"sigma_q", c.filter.sigma_q}, {"sigma_db", c.filter.sigma_db}}},
        {"rotate_bearing",
         {{"rotation_time", c.rotate_bearing.rotation_time},
          {"bearing_std_deg", c.rotate_bearing.bearing_std_deg},
          {"travel_leg", c.rotate_bearing.travel_leg}}},
        {"dual_antenna", {{"offset_db", c.dual_antenna.offset_db}}},
        {"crlb",
         {{"radius", c.crlb.radius},
          {"revolve_rate_deg_s", c.crlb.revolve_rate_deg_s},
          {"sample_period", c.crlb.sample_period},
          {"sigma_db", c.crlb.sigma_db},
          {"steps", c.crlb.steps}}},
        {"transect",
         {{"start_offset_x", c.transect.start_offset.x()},
          {"start_offset_y", c.transect.start_offset.y()},
          {"velocity_x", c.transect.velocity.x()},
          {"velocity_y", c.transect.velocity.y()},
          {"duration", c.transect.duration}}},
    };
}

}  // namespace gyro
