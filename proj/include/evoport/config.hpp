#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "evoport/portfolio.hpp"
#include "evoport/problems.hpp"

namespace evoport {

/// Bad option value, unknown or duplicate key, failed cross-field check.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A configuration file could not be read.
class ConfigIoError : public Error {
public:
    using Error::Error;
};

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
};

/// Parsed key = value file.
///
/// Grammar, one statement per line:
///   line    := blank | comment | key ws* '=' ws* value ws* comment?
///   key     := [A-Za-z][A-Za-z0-9_]*
///   comment := '#' anything
/// The value is everything between '=' and the first '#', trimmed, and must
/// not be empty. Duplicate keys and keys outside the allowed set are errors.
struct ConfigFile {
    std::string origin;
    std::map<std::string, ConfigEntry> entries;

    bool contains(const std::string& key) const { return entries.contains(key); }
};

ConfigFile parse_config_text(std::string_view text, std::span<const std::string_view> knownKeys,
                             const std::string& origin = "<text>");
ConfigFile parse_config_file(const std::filesystem::path& path,
                             std::span<const std::string_view> knownKeys);

/// Closest key by edit distance, for "did you mean" messages.
std::string nearest_key(std::string_view key, std::span<const std::string_view> knownKeys);

enum class ConfigKind { Port, Par, Umda, Ecga, Hboa };
std::span<const std::string_view> known_keys(ConfigKind kind);
std::string default_file_name(ConfigKind kind);

/// Everything a run needs. Defaults describe a runnable configuration.
struct PortfolioConfig {
    int problemType = 10;
    std::size_t stringSize = 50;
    double sigmaK = 0.0;
    std::size_t trapK = 5;
    std::size_t nRuns = 1;
    std::uint64_t seed = 1;
    TimeMode timeMode = TimeMode::WorkUnit;
    /// Work units, or milliseconds in wallclock mode. Unset means the mode default.
    std::optional<double> initialSlice;
    std::optional<std::uint64_t> maxFitnessCalls;
    std::optional<std::size_t> maxSweeps;
    std::optional<double> targetFitness;
    std::optional<double> maxWallSeconds;
    std::string outputDir = ".";
    std::string parFile = "ParParameters.txt";
    std::string umdaFile = "UMDAParameters.txt";
    std::string ecgaFile = "ECGAParameters.txt";
    std::string hboaFile = "HBOAParameters.txt";
    EngineSettings engines;

    /// Slice in schedule units: work units, or nanoseconds in wallclock mode.
    double initial_slice_units() const;
    StopCondition stop_condition() const;
    PortfolioSettings portfolio_settings() const;
    ProblemOptions problem_options() const { return {trapK}; }

    bool operator==(const PortfolioConfig& other) const;
};

/// Overlays the keys of one parsed file onto cfg.
void apply_config(PortfolioConfig& cfg, ConfigKind kind, const ConfigFile& file);

/// Text of one of the five files; parsing it back yields the same values.
std::string serialize_config(const PortfolioConfig& cfg, ConfigKind kind);

/// Reads PortParameters-style file at path plus the four algorithm files it
/// names (resolved relative to its directory). Algorithm files left at their
/// default names may be absent; explicitly named ones must exist.
PortfolioConfig load_config(const std::filesystem::path& portPath);

/// Cross-field checks. Throws ConfigError (or UnknownProblem) naming every
/// offending key.
void validate(const PortfolioConfig& cfg, const ProblemRegistry& registry);

}  // namespace evoport
