#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evoport/report.hpp"
#include "evoport/runner.hpp"

using namespace evoport;

namespace {

std::string run_text(const PortfolioConfig& cfg, std::size_t run = 0) {
    ProblemRegistry reg;
    std::ostringstream out;
    run_and_report(cfg, reg, run, out);
    return out.str();
}

PortfolioConfig trap_config() {
    PortfolioConfig cfg;
    cfg.problemType = 15;
    cfg.stringSize = 30;
    cfg.seed = 11;
    cfg.targetFitness = 30;
    cfg.maxFitnessCalls = 2000000;
    return cfg;
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_number(10000) == "10000");
    CHECK(format_number(1e6) == "1e+06");
    CHECK(format_number(0.675) == "0.675");
    CHECK(format_number(1.0 / 3.0) == "0.333333");
}

TEST_CASE("record layout") {
    SweepReport report;
    report.sweep = 0;
    report.T = 10000;
    EngineSnapshot umda;
    umda.name = "UMDA";
    umda.active = true;
    umda.generations = 3;
    umda.fitnessCalls = 120;
    umda.bestFitness = 7;
    umda.bestAverage = 5.5;
    umda.populationSizes = {16, 32};
    umda.improvedBest = "0111";
    report.engines.push_back(umda);
    CHECK(format_record(to_records(report)[0]) == "0\tUMDA\t1\t10000\t3\t120\t7\t5.5\t16,32\t0111\t-");

    report.engines[0].active = false;
    report.engines[0].improvedBest.reset();
    report.deactivated = {"UMDA"};
    CHECK(format_record(to_records(report)[0]) == "0\tUMDA\t0\t10000\t3\t120\t7\t5.5\t16,32\t-\tdeactivated:UMDA");
}

TEST_CASE("file names") {
    CHECK(output_file_name(10, 0).string() == "PORTFOLIO_10_0.txt");
    CHECK(output_file_name(21, 3).string() == "PORTFOLIO_21_3.txt");
    const auto dir = std::filesystem::temp_directory_path() / "evoport_names";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "PORTFOLIO_21_3.txt") << "x";
    CHECK(output_file_name(21, 3, dir).filename() == "PORTFOLIO_21_3.1.txt");
    std::ofstream(dir / "PORTFOLIO_21_3.1.txt") << "x";
    CHECK(output_file_name(21, 3, dir).filename() == "PORTFOLIO_21_3.2.txt");
    std::filesystem::remove_all(dir);
}

TEST_CASE("run files parse back losslessly") {
    const std::string text = run_text(trap_config());
    std::istringstream in(text);
    const ReportFile file = read_report(in);
    CHECK(write_report(file) == text);
    CHECK(*find_value(file.metadata, "problemType") == "15");
    REQUIRE(file.result);
    CHECK(*find_value(*file.result, "stopReason") == "target");
    CHECK(*find_value(*file.result, "bestFitness") == "30");
    CHECK(file.result->size() == 5);

    std::size_t deactivations = 0;
    for (const auto& r : file.records) deactivations += r.event.rfind("deactivated:", 0) == 0;
    // Each engine is reported deactivated at most once and never appears again.
    for (const std::string name : {"UMDA", "ECGA"}) {
        std::optional<std::size_t> gone;
        for (const auto& r : file.records) {
            if (r.engine != name) continue;
            REQUIRE_FALSE(gone);
            if (r.event == "deactivated:" + name) gone = r.sweep;
        }
    }
    CHECK(deactivations <= 2);
}

TEST_CASE("records match the sweep history") {
    ProblemRegistry reg;
    const auto cfg = trap_config();
    std::ostringstream out;
    const RunResult result = run_and_report(cfg, reg, 0, out);
    std::istringstream in(out.str());
    const auto file = read_report(in);
    std::vector<ReportRecord> expected;
    for (const auto& sweep : result.history) {
        for (auto r : to_records(sweep)) {
            // The file keeps 6 significant digits.
            r.slice = std::stod(format_number(r.slice));
            r.bestFitness = std::stod(format_number(r.bestFitness));
            r.bestAverage = std::stod(format_number(r.bestAverage));
            expected.push_back(r);
        }
    }
    CHECK(file.records == expected);
    CHECK(*find_value(*file.result, "totalFitnessCalls") == std::to_string(result.totalFitnessCalls));
    CHECK(*find_value(*file.result, "bestIndividual") == result.best.to_string());
}

TEST_CASE("workunit replays are byte identical, wallclock runs carry a timestamp") {
    auto cfg = trap_config();
    CHECK(run_text(cfg) == run_text(cfg));
    CHECK(run_text(cfg, 0) != run_text(cfg, 1));

    cfg.timeMode = TimeMode::WallClock;
    cfg.initialSlice = 1.0;
    const auto text = run_text(cfg);
    std::istringstream in(text);
    const auto file = read_report(in);
    CHECK(find_value(file.metadata, "started"));
    CHECK(find_value(*file.result, "wallSeconds"));
}

TEST_CASE("console mirror gets whole prefixed lines") {
    std::ostringstream console_out;
    ConsoleMirror console(console_out);
    std::ostringstream file_out;
    ReportWriter writer(file_out, &console, "[run 2] ");
    RunMetadata meta;
    writer.begin(meta);
    std::istringstream lines(console_out.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        CHECK(line.rfind("[run 2] ", 0) == 0);
        ++count;
    }
    CHECK(count == 3);
}

TEST_CASE("malformed files are rejected") {
    std::istringstream bad("# evoport v0\n");
    CHECK_THROWS_AS(read_report(bad), Error);
    std::istringstream fields(std::string(kReportMagic) + "\n# a=1\n" + kReportColumns + "\n0\tUMDA\t1\n");
    CHECK_THROWS_AS(read_report(fields), Error);
}
