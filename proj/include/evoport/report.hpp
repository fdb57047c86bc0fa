#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evoport/portfolio.hpp"

namespace evoport {

/// Output file layout (tab separated, one line per entry, '\n' endings):
///
///   # evoport v1
///   # key=value key=value ...              run metadata
///   sweep engine active slice generations fitnessCalls bestFitness bestAverage populationSizes bestIndividual event
///   <one record per engine that ran in the sweep>
///   # result key=value ...                 final line
///
/// Numbers that are not counts are printed with 6 significant digits (%.6g).
/// populationSizes is a comma list of live level sizes. bestIndividual is the
/// engine's best string when it improved during the sweep, else "-". event is
/// "-", "deactivated:<NAME>" on the sweep that removed the engine, or
/// "partial" when a stop condition cut that sweep short.
inline constexpr const char* kReportMagic = "# evoport v1";
inline constexpr const char* kReportColumns =
    "sweep\tengine\tactive\tslice\tgenerations\tfitnessCalls\tbestFitness\tbestAverage\t"
    "populationSizes\tbestIndividual\tevent";

std::string format_number(double value);

struct ReportRecord {
    std::size_t sweep = 0;
    std::string engine;
    bool active = true;
    double slice = 0.0;
    std::size_t generations = 0;
    std::uint64_t fitnessCalls = 0;
    double bestFitness = 0.0;
    double bestAverage = 0.0;
    std::vector<std::size_t> populationSizes;
    std::optional<std::string> bestIndividual;
    std::string event = "-";

    bool operator==(const ReportRecord&) const = default;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// In-memory form of an output file.
struct ReportFile {
    KeyValues metadata;
    std::vector<ReportRecord> records;
    std::optional<KeyValues> result;

    bool operator==(const ReportFile&) const = default;
};

std::vector<ReportRecord> to_records(const SweepReport& report);
std::string format_record(const ReportRecord& record);
std::string format_key_values(const std::string& prefix, const KeyValues& kv);

struct RunMetadata {
    int problemType = 0;
    std::size_t stringSize = 0;
    double sigmaK = 0.0;
    std::uint64_t seed = 0;
    std::size_t run = 0;
    TimeMode mode = TimeMode::WorkUnit;
    double initialSlice = 0.0;
    /// Wall-clock start, only written in wallclock mode so workunit files replay byte for byte.
    std::optional<std::string> started;
};

KeyValues metadata_values(const RunMetadata& meta);
KeyValues result_values(const RunResult& result, TimeMode mode);

std::string write_report(const ReportFile& file);
ReportFile read_report(std::istream& in);
ReportFile read_report_file(const std::filesystem::path& path);

/// Looks up a key in a metadata or result list.
std::optional<std::string> find_value(const KeyValues& kv, const std::string& key);

/// Shared console; each call writes whole lines under one lock.
class ConsoleMirror {
public:
    explicit ConsoleMirror(std::ostream& out) : out_(out) {}
    void write(const std::string& lines);

private:
    std::ostream& out_;
    std::mutex mutex_;
};

/// Writes one run's file and mirrors every line to the console.
class ReportWriter {
public:
    ReportWriter(std::ostream& out, ConsoleMirror* console = nullptr, std::string consolePrefix = {});

    void begin(const RunMetadata& meta);
    void write_report_line(const SweepReport& report);
    void finish(const RunResult& result);

private:
    void emit(const std::string& lines);

    std::ostream& out_;
    ConsoleMirror* console_;
    std::string prefix_;
    TimeMode mode_ = TimeMode::WorkUnit;
};

/// dir/PORTFOLIO_<problemType>_<runIndex>.txt, or with .1, .2, ... before the
/// extension when that name is taken.
std::filesystem::path output_file_name(int problemType, std::size_t runIndex,
                                       const std::filesystem::path& dir = {});

}  // namespace evoport
