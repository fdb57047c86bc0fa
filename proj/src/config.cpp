#include "evoport/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace evoport {

namespace {

constexpr std::array<std::string_view, 17> kPortKeys = {
    "problemType", "stringSize",  "sigmaK",          "trapK",      "nRuns",
    "seed",        "timeMode",    "initialSlice",    "maxFitnessCalls",
    "maxSweeps",   "targetFitness", "maxWallSeconds", "outputDir", "parFile",
    "umdaFile",    "ecgaFile",    "hboaFile"};
constexpr std::array<std::string_view, 2> kParKeys = {"initialPopSize", "runRatio"};
constexpr std::array<std::string_view, 2> kUmdaKeys = {"tournamentSize", "eliteCount"};
constexpr std::array<std::string_view, 4> kEcgaKeys = {"tournamentSize", "maxGroupSize", "eliteCount",
                                                       "parallelKernels"};
constexpr std::array<std::string_view, 4> kHboaKeys = {"tournamentSize", "offspringFraction",
                                                       "rtrWindow", "parallelKernels"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_key_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_key_char(char c) { return is_key_start(c) || (c >= '0' && c <= '9') || c == '_'; }

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

[[noreturn]] void fail(const ConfigFile& file, const std::string& key, const std::string& what) {
    auto it = file.entries.find(key);
    const std::string where =
        it == file.entries.end() ? file.origin : file.origin + ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": key '" + key + "': " + what);
}

template <typename Int>
std::optional<Int> get_int(const ConfigFile& file, const std::string& key) {
    auto it = file.entries.find(key);
    if (it == file.entries.end()) {
        return std::nullopt;
    }
    const std::string& v = it->second.value;
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(file, key, std::string("expected ") + (std::is_signed_v<Int> ? "an integer" : "a non-negative integer") +
                            ", got '" + v + "'");
    }
    return out;
}

std::optional<double> get_double(const ConfigFile& file, const std::string& key) {
    auto it = file.entries.find(key);
    if (it == file.entries.end()) {
        return std::nullopt;
    }
    const std::string& v = it->second.value;
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        fail(file, key, "expected a finite number, got '" + v + "'");
    }
    return out;
}

std::optional<bool> get_bool(const ConfigFile& file, const std::string& key) {
    auto it = file.entries.find(key);
    if (it == file.entries.end()) {
        return std::nullopt;
    }
    const std::string& v = it->second.value;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(file, key, "expected true or false, got '" + v + "'");
}

std::optional<std::string> get_string(const ConfigFile& file, const std::string& key) {
    auto it = file.entries.find(key);
    if (it == file.entries.end()) {
        return std::nullopt;
    }
    return it->second.value;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::string nearest_key(std::string_view key, std::span<const std::string_view> knownKeys) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (auto k : knownKeys) {
        const std::size_t d = edit_distance(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

ConfigFile parse_config_text(std::string_view text, std::span<const std::string_view> knownKeys,
                             const std::string& origin) {
    ConfigFile file;
    file.origin = origin;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);

        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (!is_key_start(line.front())) {
            throw ConfigError(where + ": syntax error: expected 'key = value'");
        }
        std::size_t k = 1;
        while (k < line.size() && is_key_char(line[k])) {
            ++k;
        }
        const std::string key(line.substr(0, k));
        std::string_view rest = trim(line.substr(k));
        if (rest.empty() || rest.front() != '=') {
            throw ConfigError(where + ": syntax error after key '" + key + "': expected '='");
        }
        const std::string_view value = trim(rest.substr(1));
        if (value.empty()) {
            throw ConfigError(where + ": key '" + key + "': missing value");
        }
        if (std::find(knownKeys.begin(), knownKeys.end(), key) == knownKeys.end()) {
            throw ConfigError(where + ": unknown key '" + key + "' (did you mean '" +
                              nearest_key(key, knownKeys) + "'?)");
        }
        if (file.entries.contains(key)) {
            throw ConfigError(where + ": duplicate key '" + key + "' (first set on line " +
                              std::to_string(file.entries.at(key).line) + ")");
        }
        file.entries.emplace(key, ConfigEntry{std::string(value), line_no});
        if (end == text.size()) break;
    }
    return file;
}

ConfigFile parse_config_file(const std::filesystem::path& path,
                             std::span<const std::string_view> knownKeys) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigIoError("cannot read configuration file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), knownKeys, path.string());
}

std::span<const std::string_view> known_keys(ConfigKind kind) {
    switch (kind) {
    case ConfigKind::Port: return kPortKeys;
    case ConfigKind::Par: return kParKeys;
    case ConfigKind::Umda: return kUmdaKeys;
    case ConfigKind::Ecga: return kEcgaKeys;
    case ConfigKind::Hboa: return kHboaKeys;
    }
    return {};
}

std::string default_file_name(ConfigKind kind) {
    switch (kind) {
    case ConfigKind::Port: return "PortParameters.txt";
    case ConfigKind::Par: return "ParParameters.txt";
    case ConfigKind::Umda: return "UMDAParameters.txt";
    case ConfigKind::Ecga: return "ECGAParameters.txt";
    case ConfigKind::Hboa: return "HBOAParameters.txt";
    }
    return {};
}

double PortfolioConfig::initial_slice_units() const {
    if (timeMode == TimeMode::WorkUnit) {
        return initialSlice.value_or(1e4);
    }
    return initialSlice.value_or(100.0) * 1e6;
}

StopCondition PortfolioConfig::stop_condition() const {
    StopCondition stop;
    stop.maxFitnessCalls = maxFitnessCalls;
    stop.maxSweeps = maxSweeps;
    stop.targetFitness = targetFitness;
    stop.maxWallSeconds = maxWallSeconds;
    return stop;
}

PortfolioSettings PortfolioConfig::portfolio_settings() const {
    return PortfolioSettings{engines, initial_slice_units(), timeMode};
}

bool PortfolioConfig::operator==(const PortfolioConfig& o) const {
    const auto& e = engines;
    const auto& f = o.engines;
    return problemType == o.problemType && stringSize == o.stringSize && sigmaK == o.sigmaK &&
           trapK == o.trapK && nRuns == o.nRuns && seed == o.seed && timeMode == o.timeMode &&
           initialSlice == o.initialSlice && maxFitnessCalls == o.maxFitnessCalls &&
           maxSweeps == o.maxSweeps && targetFitness == o.targetFitness &&
           maxWallSeconds == o.maxWallSeconds && outputDir == o.outputDir && parFile == o.parFile &&
           umdaFile == o.umdaFile && ecgaFile == o.ecgaFile && hboaFile == o.hboaFile &&
           e.ladder.initialSize == f.ladder.initialSize && e.ladder.runRatio == f.ladder.runRatio &&
           e.umda.tournamentSize == f.umda.tournamentSize && e.umda.eliteCount == f.umda.eliteCount &&
           e.ecga.tournamentSize == f.ecga.tournamentSize &&
           e.ecga.maxGroupSize == f.ecga.maxGroupSize && e.ecga.eliteCount == f.ecga.eliteCount &&
           e.ecga.exec == f.ecga.exec && e.hboa.tournamentSize == f.hboa.tournamentSize &&
           e.hboa.offspringFraction == f.hboa.offspringFraction &&
           e.hboa.rtrWindow == f.hboa.rtrWindow && e.hboa.exec == f.hboa.exec;
}

void apply_config(PortfolioConfig& cfg, ConfigKind kind, const ConfigFile& file) {
    auto set = [](auto& field, auto value) {
        if (value) field = *value;
    };
    auto exec_of = [](std::optional<bool> parallel) -> std::optional<Exec> {
        if (!parallel) return std::nullopt;
        return *parallel ? Exec::Parallel : Exec::Serial;
    };
    switch (kind) {
    case ConfigKind::Port:
        set(cfg.problemType, get_int<int>(file, "problemType"));
        set(cfg.stringSize, get_int<std::size_t>(file, "stringSize"));
        set(cfg.sigmaK, get_double(file, "sigmaK"));
        set(cfg.trapK, get_int<std::size_t>(file, "trapK"));
        set(cfg.nRuns, get_int<std::size_t>(file, "nRuns"));
        set(cfg.seed, get_int<std::uint64_t>(file, "seed"));
        if (auto mode = get_string(file, "timeMode")) {
            try {
                cfg.timeMode = parse_time_mode(*mode);
            } catch (const Error& e) {
                fail(file, "timeMode", e.what());
            }
        }
        if (auto v = get_double(file, "initialSlice")) cfg.initialSlice = v;
        if (auto v = get_int<std::uint64_t>(file, "maxFitnessCalls")) cfg.maxFitnessCalls = v;
        if (auto v = get_int<std::size_t>(file, "maxSweeps")) cfg.maxSweeps = v;
        if (auto v = get_double(file, "targetFitness")) cfg.targetFitness = v;
        if (auto v = get_double(file, "maxWallSeconds")) cfg.maxWallSeconds = v;
        set(cfg.outputDir, get_string(file, "outputDir"));
        set(cfg.parFile, get_string(file, "parFile"));
        set(cfg.umdaFile, get_string(file, "umdaFile"));
        set(cfg.ecgaFile, get_string(file, "ecgaFile"));
        set(cfg.hboaFile, get_string(file, "hboaFile"));
        break;
    case ConfigKind::Par:
        set(cfg.engines.ladder.initialSize, get_int<std::size_t>(file, "initialPopSize"));
        set(cfg.engines.ladder.runRatio, get_int<std::size_t>(file, "runRatio"));
        break;
    case ConfigKind::Umda:
        set(cfg.engines.umda.tournamentSize, get_int<std::size_t>(file, "tournamentSize"));
        set(cfg.engines.umda.eliteCount, get_int<std::size_t>(file, "eliteCount"));
        break;
    case ConfigKind::Ecga:
        set(cfg.engines.ecga.tournamentSize, get_int<std::size_t>(file, "tournamentSize"));
        set(cfg.engines.ecga.maxGroupSize, get_int<std::size_t>(file, "maxGroupSize"));
        set(cfg.engines.ecga.eliteCount, get_int<std::size_t>(file, "eliteCount"));
        set(cfg.engines.ecga.exec, exec_of(get_bool(file, "parallelKernels")));
        break;
    case ConfigKind::Hboa:
        set(cfg.engines.hboa.tournamentSize, get_int<std::size_t>(file, "tournamentSize"));
        set(cfg.engines.hboa.offspringFraction, get_double(file, "offspringFraction"));
        if (auto w = get_string(file, "rtrWindow")) {
            if (*w == "auto") {
                cfg.engines.hboa.rtrWindow = 0;
            } else {
                set(cfg.engines.hboa.rtrWindow, get_int<std::size_t>(file, "rtrWindow"));
                if (cfg.engines.hboa.rtrWindow == 0) {
                    fail(file, "rtrWindow", "expected 'auto' or a positive integer");
                }
            }
        }
        set(cfg.engines.hboa.exec, exec_of(get_bool(file, "parallelKernels")));
        break;
    }
}

std::string serialize_config(const PortfolioConfig& cfg, ConfigKind kind) {
    std::ostringstream out;
    auto kv = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    const auto& e = cfg.engines;
    switch (kind) {
    case ConfigKind::Port:
        out << "# Portfolio settings\n";
        kv("problemType", std::to_string(cfg.problemType));
        kv("stringSize", std::to_string(cfg.stringSize));
        kv("sigmaK", format_double(cfg.sigmaK));
        kv("trapK", std::to_string(cfg.trapK));
        kv("nRuns", std::to_string(cfg.nRuns));
        kv("seed", std::to_string(cfg.seed));
        kv("timeMode", to_string(cfg.timeMode));
        if (cfg.initialSlice) kv("initialSlice", format_double(*cfg.initialSlice));
        if (cfg.maxFitnessCalls) kv("maxFitnessCalls", std::to_string(*cfg.maxFitnessCalls));
        if (cfg.maxSweeps) kv("maxSweeps", std::to_string(*cfg.maxSweeps));
        if (cfg.targetFitness) kv("targetFitness", format_double(*cfg.targetFitness));
        if (cfg.maxWallSeconds) kv("maxWallSeconds", format_double(*cfg.maxWallSeconds));
        kv("outputDir", cfg.outputDir);
        kv("parFile", cfg.parFile);
        kv("umdaFile", cfg.umdaFile);
        kv("ecgaFile", cfg.ecgaFile);
        kv("hboaFile", cfg.hboaFile);
        break;
    case ConfigKind::Par:
        out << "# Parameter-less population sizing\n";
        kv("initialPopSize", std::to_string(e.ladder.initialSize));
        kv("runRatio", std::to_string(e.ladder.runRatio));
        break;
    case ConfigKind::Umda:
        out << "# UMDA\n";
        kv("tournamentSize", std::to_string(e.umda.tournamentSize));
        kv("eliteCount", std::to_string(e.umda.eliteCount));
        break;
    case ConfigKind::Ecga:
        out << "# ECGA\n";
        kv("tournamentSize", std::to_string(e.ecga.tournamentSize));
        kv("maxGroupSize", std::to_string(e.ecga.maxGroupSize));
        kv("eliteCount", std::to_string(e.ecga.eliteCount));
        kv("parallelKernels", e.ecga.exec == Exec::Parallel ? "true" : "false");
        break;
    case ConfigKind::Hboa:
        out << "# hBOA\n";
        kv("tournamentSize", std::to_string(e.hboa.tournamentSize));
        kv("offspringFraction", format_double(e.hboa.offspringFraction));
        kv("rtrWindow", e.hboa.rtrWindow == 0 ? "auto" : std::to_string(e.hboa.rtrWindow));
        kv("parallelKernels", e.hboa.exec == Exec::Parallel ? "true" : "false");
        break;
    }
    return out.str();
}

PortfolioConfig load_config(const std::filesystem::path& portPath) {
    PortfolioConfig cfg;
    const ConfigFile port = parse_config_file(portPath, known_keys(ConfigKind::Port));
    apply_config(cfg, ConfigKind::Port, port);

    const auto dir = portPath.parent_path();
    const std::pair<ConfigKind, std::string> files[] = {
        {ConfigKind::Par, cfg.parFile},
        {ConfigKind::Umda, cfg.umdaFile},
        {ConfigKind::Ecga, cfg.ecgaFile},
        {ConfigKind::Hboa, cfg.hboaFile},
    };
    const char* keys[] = {"parFile", "umdaFile", "ecgaFile", "hboaFile"};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& [kind, name] = files[i];
        std::filesystem::path path = name;
        if (path.is_relative()) {
            path = dir / path;
        }
        if (!std::filesystem::exists(path)) {
            if (port.contains(keys[i])) {
                throw ConfigIoError("cannot read configuration file '" + path.string() + "' named by " +
                                    keys[i]);
            }
            continue;
        }
        apply_config(cfg, kind, parse_config_file(path, known_keys(kind)));
    }
    return cfg;
}

void validate(const PortfolioConfig& cfg, const ProblemRegistry& registry) {
    std::vector<std::string> errors;
    auto require = [&](bool ok, const std::string& key, const std::string& constraint) {
        if (!ok) errors.push_back("key '" + key + "': " + constraint);
    };

    if (!registry.contains(cfg.problemType)) {
        throw UnknownProblem("key 'problemType': unknown problem " + std::to_string(cfg.problemType));
    }
    try {
        registry.check(cfg.problemType, cfg.stringSize, cfg.problem_options());
    } catch (const IncompatibleSize& e) {
        errors.push_back(std::string("key 'stringSize': ") + e.what());
    }
    require(std::isfinite(cfg.sigmaK) && cfg.sigmaK >= 0.0, "sigmaK", "must be >= 0");
    require(cfg.nRuns >= 1, "nRuns", "must be >= 1");
    require(!cfg.initialSlice || *cfg.initialSlice > 0.0, "initialSlice", "must be > 0");
    require(!cfg.maxWallSeconds || *cfg.maxWallSeconds > 0.0, "maxWallSeconds", "must be > 0");
    require(!cfg.outputDir.empty(), "outputDir", "must not be empty");

    const auto& e = cfg.engines;
    require(e.ladder.initialSize >= 2, "initialPopSize", "must be >= 2");
    require(e.ladder.runRatio >= 2, "runRatio", "must be >= 2");
    require(e.umda.tournamentSize >= 2, "UMDA tournamentSize", "must be >= 2");
    require(e.umda.eliteCount < e.ladder.initialSize, "UMDA eliteCount", "must be < initialPopSize");
    require(e.ecga.tournamentSize >= 2, "ECGA tournamentSize", "must be >= 2");
    require(e.ecga.maxGroupSize >= 1 && e.ecga.maxGroupSize <= 24, "ECGA maxGroupSize",
            "must be between 1 and 24");
    require(e.ecga.eliteCount < e.ladder.initialSize, "ECGA eliteCount", "must be < initialPopSize");
    require(e.hboa.tournamentSize >= 2, "HBOA tournamentSize", "must be >= 2");
    require(e.hboa.offspringFraction > 0.0 && e.hboa.offspringFraction <= 1.0, "HBOA offspringFraction",
            "must be in (0, 1]");

    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& err : errors) {
            msg += "\n  " + err;
        }
        throw ConfigError(msg);
    }
}

}  // namespace evoport
