#include "gyrocopter_cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gyrocopter/crlb.hpp"
#include "gyrocopter/errors.hpp"
#include "gyrocopter/mission.hpp"
#include "gyrocopter/monte_carlo.hpp"
#include "gyrocopter/rng.hpp"

namespace gyro::cli {

namespace fs = std::filesystem;

std::string config_hash(const ScenarioConfig& config) {
    return fmt::format("{:016x}", fnv1a(scenario_to_json(config).dump()));
}

std::string manifest_comment(const RunManifest& m) {
    return fmt::format("# tool=gyrocopter version={} command={} seed={} config_hash={} config={}", m.tool_version,
                       m.command, m.seed, m.config_hash, m.config_path.empty() ? "<preset>" : m.config_path);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> parse_word_list(const std::string& text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("list", "empty item in '" + text + "'");
        out.push_back(item);
    }
    return out;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : parse_word_list(text)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || !std::isfinite(v)) throw ConfigError("list", "not a number: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

namespace {

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    bool force = false;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o, const std::string& default_preset) {
    o.preset = default_preset;
    cmd->add_option("--config", o.config_path, "Scenario JSON; missing keys fall back to the preset");
    cmd->add_option("--preset", o.preset, "Base scenario: default, field or convergence")->capture_default_str();
    cmd->add_option("--seed", o.seed, "64-bit base seed")->capture_default_str();
    cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    cmd->add_flag("--force", o.force, "Overwrite existing outputs");
    cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

ScenarioConfig load_config(const CommonOptions& o) {
    const ScenarioConfig base = preset(o.preset);
    ScenarioConfig c = o.config_path.empty() ? base : load_scenario(o.config_path, base);
    c.validate();
    return c;
}

/// Output files for one command. Refuses to clobber anything unless forced.
class Outputs {
public:
    Outputs(const CommonOptions& o, std::vector<std::string> names) : dir_(o.out_dir), names_(std::move(names)) {
        if (!o.force)
            for (const auto& n : names_)
                if (fs::exists(dir_ / n))
                    throw ConfigError("--out", fmt::format("{} exists; pass --force to overwrite", (dir_ / n).string()));
        fs::create_directories(dir_);
    }
    fs::path path(const std::string& name) const { return dir_ / name; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

RunManifest manifest_for(const CommonOptions& o, const std::string& command, const ScenarioConfig& c) {
    RunManifest m;
    m.config_path = o.config_path;
    m.seed = o.seed;
    m.command = command;
    m.output_dir = o.out_dir;
    m.config_hash = config_hash(c);
    return m;
}

// ---- crlb-sweep ------------------------------------------------------------------------

struct CrlbOptions {
    CommonOptions common;
    int steps = 0;  ///< 0 keeps the config value
    std::string angles;
    std::string zetas = "0,10,20,30,40,50,60";
    int trace_stride = 10;
};

int cmd_crlb_sweep(const CrlbOptions& o, std::ostream& out) {
    ScenarioConfig config = load_config(o.common);
    if (o.steps > 0) config.crlb.steps = o.steps;
    const CrlbScenario scenario = crlb_scenario(config);

    std::vector<double> angles;
    if (o.angles.empty()) {
        for (int a = 0; a <= 360; a += 5) angles.push_back(a);
    } else {
        angles = parse_number_list(o.angles);
    }
    if (angles.empty()) throw ConfigError("--angles", "angle list is empty");
    const std::vector<double> zetas = parse_number_list(o.zetas);
    if (o.trace_stride < 1) throw ConfigError("--trace-stride", "must be >= 1");

    const Outputs files(o.common, {"crlb_sweep.csv", "crlb_trace.csv"});
    const RunManifest manifest = manifest_for(o.common, "crlb-sweep", config);

    const auto sweep = sweep_rotation(scenario, angles, scenario.steps, o.common.jobs);
    const auto dual = crlb_det(dual_antenna_information(scenario, scenario.steps).information);
    const double dual_det = dual ? *dual : std::numeric_limits<double>::infinity();
    {
        auto f = open_output(files.path("crlb_sweep.csv"));
        f << manifest_comment(manifest) << '\n' << "angle_deg,det_crlb,dual_antenna_det\n";
        for (const auto& p : sweep)
            f << format_number(p.angle_deg) << ','
              << format_number(p.det_crlb ? *p.det_crlb : std::numeric_limits<double>::infinity()) << ','
              << format_number(dual_det) << '\n';
    }
    {
        auto f = open_output(files.path("crlb_trace.csv"));
        f << manifest_comment(manifest) << '\n' << "step,zeta_deg_s,det_crlb\n";
        for (const double zeta : zetas) {
            CrlbScenario s = scenario;
            s.self_rotation = deg2rad(zeta);
            for (const auto& p : crlb_det_trace(s))
                if (p.step % o.trace_stride == 0 || p.step == s.steps)
                    f << p.step << ',' << format_number(zeta) << ','
                      << format_number(p.det_crlb ? *p.det_crlb : std::numeric_limits<double>::infinity()) << '\n';
        }
    }
    out << fmt::format("crlb-sweep: {} angles, {} steps, dual-antenna det {}\n", sweep.size(), scenario.steps,
                       format_number(dual_det));
    return kOk;
}

// ---- simulate ----------------------------------------------------------------------------

struct SimulateOptions {
    CommonOptions common;
    std::string method;
    std::string planner;
};

void apply_overrides(ScenarioConfig& c, const std::string& method, const std::string& planner) {
    if (!method.empty()) c.method = parse_method(method);
    if (!planner.empty()) c.planner.mode = parse_planner_mode(planner);
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
    ScenarioConfig config = load_config(o.common);
    apply_overrides(config, o.method, o.planner);
    config.validate();
    const Outputs files(o.common, {"trajectory.csv", "belief_trace.csv", "summary.json"});
    const RunManifest manifest = manifest_for(o.common, "simulate", config);

    const MissionResult result = run_mission(config, o.common.seed);
    {
        auto f = open_output(files.path("trajectory.csv"));
        f << manifest_comment(manifest) << '\n' << "t_s,x_m,y_m,z_m,heading_deg\n";
        for (const auto& [t, s] : result.trajectory)
            f << format_number(t) << ',' << format_number(s.position().x()) << ',' << format_number(s.position().y())
              << ',' << format_number(s.position().z()) << ',' << format_number(rad2deg(s.heading())) << '\n';
    }
    {
        auto f = open_output(files.path("belief_trace.csv"));
        f << manifest_comment(manifest) << '\n' << "source_id,t_s,det_cov\n";
        for (std::size_t i = 0; i < result.belief_det_trace.size(); ++i)
            for (const auto& p : result.belief_det_trace[i])
                f << config.sources[i].id << ',' << format_number(p.t) << ',' << format_number(p.det) << '\n';
    }
    {
        nlohmann::json j = result.summary_json();
        j["manifest"] = {{"tool_version", manifest.tool_version},
                         {"command", manifest.command},
                         {"seed", manifest.seed},
                         {"config_hash", manifest.config_hash}};
        j["method"] = to_string(config.method);
        j["planner"] = to_string(config.planner.mode);
        auto f = open_output(files.path("summary.json"));
        f << j.dump(2) << '\n';
    }
    out << fmt::format("simulate: method={} planner={} total_time={} s localized={}/{}\n", to_string(config.method),
                       to_string(config.planner.mode), format_number(result.total_time),
                       result.per_source.size() - static_cast<std::size_t>(result.timeouts()),
                       result.per_source.size());
    return kOk;
}

// ---- batch -------------------------------------------------------------------------------

struct BatchOptions {
    CommonOptions common;
    int tracks = 10;
    int runs = 10;
    std::string methods = "gyro,dual_antenna,rotate_bearing,rssi_ideal";
    std::string sigma_q;
    std::string planner;
};

std::string pm(const SampleStats& s) {
    if (s.count == 0) return "n/a";
    return fmt::format("{:.1f} +/- {:.1f}", s.mean, s.std);
}

int cmd_batch(const BatchOptions& o, std::ostream& out) {
    ScenarioConfig config = load_config(o.common);
    apply_overrides(config, "", o.planner);
    if (o.tracks < 1) throw ConfigError("--tracks", "must be >= 1");
    if (o.runs < 1) throw ConfigError("--runs", "must be >= 1");
    std::vector<Method> methods;
    for (const auto& m : parse_word_list(o.methods)) methods.push_back(parse_method(m));
    if (methods.empty()) throw ConfigError("--methods", "method list is empty");
    std::vector<double> sigmas = parse_number_list(o.sigma_q);
    const bool sweep = !sigmas.empty();
    if (!sweep) sigmas.push_back(config.source_sigma_q);
    for (double s : sigmas)
        if (s < 0.0) throw ConfigError("--sigma-q", "values must be >= 0");

    const Outputs files(o.common, {"batch_runs.csv", "batch_summary.csv"});
    const RunManifest manifest = manifest_for(o.common, "batch", config);

    auto runs_csv = open_output(files.path("batch_runs.csv"));
    runs_csv << manifest_comment(manifest) << '\n'
             << "track,run,method,planner,total_time_s,mean_error_m,timeouts,detection_rate,sigma_q_m\n";
    auto summary_csv = open_output(files.path("batch_summary.csv"));
    summary_csv << manifest_comment(manifest) << '\n'
                << "method,planner,sigma_q_m,runs,time_mean_s,time_std_s,error_mean_m,error_std_m,error_runs,"
                   "timeout_rate,detection_rate\n";

    for (const double sigma : sigmas) {
        ScenarioConfig block = sweep ? with_source_mobility(config, sigma) : config;
        out << fmt::format("\nsigma_q = {} m  ({} tracks x {} runs, planner {})\n", format_number(sigma), o.tracks,
                           o.runs, to_string(block.planner.mode));
        out << fmt::format("{:<16} {:>18} {:>18} {:>9} {:>10}\n", "Method", "Time (s)", "Error (m)", "Timeouts",
                           "Detection");
        for (const Method method : methods) {
            block.method = method;
            const MonteCarloResult r = run_monte_carlo(block, o.tracks, o.runs, o.common.seed, o.common.jobs);
            for (const auto& rec : r.runs)
                runs_csv << rec.track << ',' << rec.run << ',' << to_string(rec.method) << ','
                         << to_string(rec.planner) << ',' << format_number(rec.total_time) << ','
                         << format_number(rec.mean_error) << ',' << rec.timeouts << ','
                         << format_number(rec.detection_rate) << ',' << format_number(rec.sigma_q) << '\n';
            const BatchSummary& s = r.summary;
            summary_csv << to_string(method) << ',' << to_string(s.planner) << ',' << format_number(sigma) << ','
                        << s.runs << ',' << format_number(s.total_time.mean) << ',' << format_number(s.total_time.std)
                        << ',' << format_number(s.mean_error.count ? s.mean_error.mean : std::nan("")) << ','
                        << format_number(s.mean_error.count ? s.mean_error.std : std::nan("")) << ','
                        << s.mean_error.count << ',' << format_number(s.timeout_rate) << ','
                        << format_number(s.detection_rate) << '\n';
            out << fmt::format("{:<16} {:>18} {:>18} {:>8.1f}% {:>9.1f}%\n", to_string(method), pm(s.total_time),
                               pm(s.mean_error), 100.0 * s.timeout_rate, 100.0 * s.detection_rate);
        }
    }
    return kOk;
}

// ---- convergence ---------------------------------------------------------------------------

struct ConvergenceOptions {
    CommonOptions common;
    std::string zetas = "0,10,20,30,40,50,60";
};

int cmd_convergence(const ConvergenceOptions& o, std::ostream& out) {
    const ScenarioConfig config = load_config(o.common);
    const std::vector<double> zetas = parse_number_list(o.zetas);
    if (zetas.empty()) throw ConfigError("--zeta", "yaw-rate list is empty");
    const Outputs files(o.common, {"convergence.csv"});
    const RunManifest manifest = manifest_for(o.common, "convergence", config);

    const auto traces = rotation_speed_convergence(config, zetas, o.common.seed);
    auto f = open_output(files.path("convergence.csv"));
    f << manifest_comment(manifest) << '\n' << "t_s,zeta_deg_s,det_cov\n";
    for (const auto& tr : traces)
        for (const auto& p : tr.trace)
            f << format_number(p.t) << ',' << format_number(tr.zeta_deg_s) << ',' << format_number(p.det) << '\n';
    out << "zeta_deg_s  time_to_threshold_s\n";
    for (const auto& tr : traces)
        out << fmt::format("{:>10}  {}\n", format_number(tr.zeta_deg_s),
                           tr.time_to_threshold ? format_number(*tr.time_to_threshold) : "not reached");
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gyrating single-antenna RF source localization: bounds, missions and batches", "gyrocopter"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CrlbOptions crlb;
    auto* c_crlb = app.add_subcommand("crlb-sweep", "Rotation-speed sweep of the position bound");
    add_common(c_crlb, crlb.common, "default");
    c_crlb->add_option("--steps", crlb.steps, "Bound accumulation steps (default from config)");
    c_crlb->add_option("--angles", crlb.angles, "Per-sample rotation angles in degrees (default 0,5,...,360)");
    c_crlb->add_option("--zeta", crlb.zetas, "Yaw rates for crlb_trace.csv, deg/s")->capture_default_str();
    c_crlb->add_option("--trace-stride", crlb.trace_stride, "Write every n-th trace step")->capture_default_str();

    SimulateOptions sim;
    auto* c_sim = app.add_subcommand("simulate", "Run one closed-loop mission");
    add_common(c_sim, sim.common, "default");
    c_sim->add_option("--method", sim.method, "gyro, dual_antenna, rotate_bearing or rssi_ideal");
    c_sim->add_option("--planner", sim.planner, "discrete or continuous");

    BatchOptions batch;
    auto* c_batch = app.add_subcommand("batch", "Monte Carlo comparison over methods and source mobility");
    add_common(c_batch, batch.common, "default");
    c_batch->add_option("--tracks", batch.tracks, "Ground-truth path sets")->capture_default_str();
    c_batch->add_option("--runs", batch.runs, "Missions per path set")->capture_default_str();
    c_batch->add_option("--methods,--method", batch.methods, "Comma-separated methods")->capture_default_str();
    c_batch->add_option("--sigma-q", batch.sigma_q, "Comma-separated source random-walk std values, m");
    c_batch->add_option("--planner", batch.planner, "discrete or continuous");

    ConvergenceOptions conv;
    auto* c_conv = app.add_subcommand("convergence", "Filter convergence along a fixed transect per yaw rate");
    add_common(c_conv, conv.common, "convergence");
    c_conv->add_option("--zeta", conv.zetas, "Yaw rates, deg/s")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (c_crlb->parsed()) return cmd_crlb_sweep(crlb, out);
        if (c_sim->parsed()) return cmd_simulate(sim, out);
        if (c_batch->parsed()) return cmd_batch(batch, out);
        if (c_conv->parsed()) return cmd_convergence(conv, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kUsageError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const BatchRunError& e) {
        err << "error: batch aborted: " << e.what() << " (failing seed " << e.seed() << ")\n";
        return kInternalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kUsageError;
}

}  // namespace gyro::cli
