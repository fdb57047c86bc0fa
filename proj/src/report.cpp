#include "evoport/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace evoport {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

template <typename Int>
Int parse_int(const std::string& text, std::size_t line) {
    Int out{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error("report line " + std::to_string(line) + ": bad integer '" + text + "'");
    }
    return out;
}

double parse_double(const std::string& text, std::size_t line) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error("report line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return out;
}

KeyValues parse_key_values(const std::string& text, std::size_t line) {
    KeyValues kv;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error("report line " + std::to_string(line) + ": expected key=value, got '" + token + "'");
        }
        kv.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
    return kv;
}

}  // namespace

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::vector<ReportRecord> to_records(const SweepReport& report) {
    std::vector<ReportRecord> records;
    for (const auto& e : report.engines) {
        ReportRecord r;
        r.sweep = report.sweep;
        r.engine = e.name;
        r.active = e.active;
        r.slice = report.T;
        r.generations = e.generations;
        r.fitnessCalls = e.fitnessCalls;
        r.bestFitness = e.bestFitness;
        r.bestAverage = e.bestAverage;
        r.populationSizes = e.populationSizes;
        r.bestIndividual = e.improvedBest;
        if (!report.complete) {
            r.event = "partial";
        } else if (std::find(report.deactivated.begin(), report.deactivated.end(), e.name) !=
                   report.deactivated.end()) {
            r.event = "deactivated:" + e.name;
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::string format_record(const ReportRecord& r) {
    std::string sizes;
    for (std::size_t i = 0; i < r.populationSizes.size(); ++i) {
        if (i) sizes += ',';
        sizes += std::to_string(r.populationSizes[i]);
    }
    if (sizes.empty()) sizes = "-";

    std::string line = std::to_string(r.sweep);
    for (const std::string& field :
         {r.engine, std::string(r.active ? "1" : "0"), format_number(r.slice), std::to_string(r.generations),
          std::to_string(r.fitnessCalls), format_number(r.bestFitness), format_number(r.bestAverage), sizes,
          r.bestIndividual.value_or("-"), r.event}) {
        line += '\t';
        line += field;
    }
    return line;
}

std::string format_key_values(const std::string& prefix, const KeyValues& kv) {
    std::string line = prefix;
    for (const auto& [k, v] : kv) {
        line += ' ';
        line += k;
        line += '=';
        line += v;
    }
    return line;
}

KeyValues metadata_values(const RunMetadata& meta) {
    KeyValues kv = {
        {"problemType", std::to_string(meta.problemType)},
        {"stringSize", std::to_string(meta.stringSize)},
        {"sigmaK", format_number(meta.sigmaK)},
        {"seed", std::to_string(meta.seed)},
        {"run", std::to_string(meta.run)},
        {"timeMode", to_string(meta.mode)},
        {"initialSlice", format_number(meta.initialSlice)},
    };
    if (meta.mode == TimeMode::WallClock && meta.started) {
        kv.emplace_back("started", *meta.started);
    }
    return kv;
}

KeyValues result_values(const RunResult& result, TimeMode mode) {
    KeyValues kv = {
        {"stopReason", to_string(result.stopReason)},
        {"bestFitness", format_number(result.bestFitness)},
        {"totalFitnessCalls", std::to_string(result.totalFitnessCalls)},
        {"sweeps", std::to_string(result.history.size())},
        {"bestIndividual", result.best.size() ? result.best.to_string() : "-"},
    };
    if (mode == TimeMode::WallClock) {
        kv.emplace_back("wallSeconds", format_number(result.wallSeconds));
    }
    return kv;
}

std::string write_report(const ReportFile& file) {
    std::string out = kReportMagic;
    out += '\n';
    out += format_key_values("#", file.metadata) + '\n';
    out += kReportColumns;
    out += '\n';
    for (const auto& r : file.records) {
        out += format_record(r) + '\n';
    }
    if (file.result) {
        out += format_key_values("# result", *file.result) + '\n';
    }
    return out;
}

ReportFile read_report(std::istream& in) {
    ReportFile file;
    std::string line;
    std::size_t line_no = 0;

    auto next = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        return true;
    };

    if (!next() || line != kReportMagic) {
        throw Error("report: missing '" + std::string(kReportMagic) + "' header");
    }
    if (!next() || line.rfind("#", 0) != 0) {
        throw Error("report line 2: missing metadata line");
    }
    file.metadata = parse_key_values(line.substr(1), line_no);
    if (!next() || line != kReportColumns) {
        throw Error("report line 3: unexpected column header");
    }
    while (next()) {
        if (file.result) {
            throw Error("report line " + std::to_string(line_no) + ": content after the result line");
        }
        if (line.rfind("# result", 0) == 0) {
            file.result = parse_key_values(line.substr(8), line_no);
            continue;
        }
        const auto f = split(line, '\t');
        if (f.size() != 11) {
            throw Error("report line " + std::to_string(line_no) + ": expected 11 fields, got " +
                        std::to_string(f.size()));
        }
        ReportRecord r;
        r.sweep = parse_int<std::size_t>(f[0], line_no);
        r.engine = f[1];
        if (f[2] != "0" && f[2] != "1") {
            throw Error("report line " + std::to_string(line_no) + ": active must be 0 or 1");
        }
        r.active = f[2] == "1";
        r.slice = parse_double(f[3], line_no);
        r.generations = parse_int<std::size_t>(f[4], line_no);
        r.fitnessCalls = parse_int<std::uint64_t>(f[5], line_no);
        r.bestFitness = parse_double(f[6], line_no);
        r.bestAverage = parse_double(f[7], line_no);
        if (f[8] != "-") {
            for (const auto& s : split(f[8], ',')) {
                r.populationSizes.push_back(parse_int<std::size_t>(s, line_no));
            }
        }
        if (f[9] != "-") {
            r.bestIndividual = f[9];
        }
        r.event = f[10];
        file.records.push_back(std::move(r));
    }
    return file;
}

ReportFile read_report_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read report '" + path.string() + "'");
    }
    return read_report(in);
}

std::optional<std::string> find_value(const KeyValues& kv, const std::string& key) {
    for (const auto& [k, v] : kv) {
        if (k == key) return v;
    }
    return std::nullopt;
}

void ConsoleMirror::write(const std::string& lines) {
    std::lock_guard lock(mutex_);
    out_ << lines << std::flush;
}

ReportWriter::ReportWriter(std::ostream& out, ConsoleMirror* console, std::string consolePrefix)
    : out_(out), console_(console), prefix_(std::move(consolePrefix)) {}

void ReportWriter::emit(const std::string& lines) {
    out_ << lines;
    out_.flush();
    if (!out_) {
        throw Error("report: write failed");
    }
    if (console_) {
        std::string mirrored;
        std::size_t start = 0;
        while (start < lines.size()) {
            const auto end = lines.find('\n', start);
            mirrored += prefix_;
            mirrored += lines.substr(start, end - start + 1);
            if (end == std::string::npos) break;
            start = end + 1;
        }
        console_->write(mirrored);
    }
}

void ReportWriter::begin(const RunMetadata& meta) {
    mode_ = meta.mode;
    emit(std::string(kReportMagic) + '\n' + format_key_values("#", metadata_values(meta)) + '\n' +
         kReportColumns + '\n');
}

void ReportWriter::write_report_line(const SweepReport& report) {
    std::string lines;
    for (const auto& r : to_records(report)) {
        lines += format_record(r) + '\n';
    }
    emit(lines);
}

void ReportWriter::finish(const RunResult& result) {
    emit(format_key_values("# result", result_values(result, mode_)) + '\n');
}

std::filesystem::path output_file_name(int problemType, std::size_t runIndex, const std::filesystem::path& dir) {
    const std::string stem = "PORTFOLIO_" + std::to_string(problemType) + "_" + std::to_string(runIndex);
    std::filesystem::path candidate = dir / (stem + ".txt");
    for (std::size_t k = 1; std::filesystem::exists(candidate); ++k) {
        candidate = dir / (stem + "." + std::to_string(k) + ".txt");
    }
    return candidate;
}

}  // namespace evoport
