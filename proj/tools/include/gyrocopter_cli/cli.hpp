#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gyrocopter/scenario.hpp"

namespace gyro::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInternalError = 1, kUsageError = 2 };

/// Provenance stamped into every output file.
struct RunManifest {
    std::string config_path;  ///< empty for a built-in preset
    std::uint64_t seed = 0;
    std::string command;
    std::filesystem::path output_dir;
    std::string tool_version = kToolVersion;
    std::string config_hash;
};

/// 16 hex digits of FNV-1a over the canonical JSON dump of the config.
std::string config_hash(const ScenarioConfig& config);

/// `# tool=gyrocopter version=... command=... seed=... config_hash=...`
std::string manifest_comment(const RunManifest& manifest);

/// Comma-separated numbers; whitespace around items is ignored. Empty input gives an empty list.
std::vector<double> parse_number_list(const std::string& text);
std::vector<std::string> parse_word_list(const std::string& text);

/// Shortest round-trip text for a double; "nan"/"inf" for non-finite values.
std::string format_number(double v);

/// Entry point shared by the executable and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gyro::cli
