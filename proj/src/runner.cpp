#include "evoport/runner.hpp"

#include <chrono>
#include <ctime>
#include <ostream>

namespace evoport {

RngStream run_stream(std::uint64_t baseSeed, std::size_t runIndex) {
    return RngStream(baseSeed).split(runIndex);
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

RunResult run_and_report(const PortfolioConfig& cfg, const ProblemRegistry& registry, std::size_t runIndex,
                         std::ostream& out, ConsoleMirror* console, const std::atomic<bool>* interrupt) {
    const ProblemInstance problem =
        registry.lookup(cfg.problemType, cfg.stringSize, cfg.sigmaK, cfg.problem_options());

    RunMetadata meta;
    meta.problemType = cfg.problemType;
    meta.stringSize = cfg.stringSize;
    meta.sigmaK = cfg.sigmaK;
    meta.seed = cfg.seed;
    meta.run = runIndex;
    meta.mode = cfg.timeMode;
    meta.initialSlice = cfg.initial_slice_units();
    if (cfg.timeMode == TimeMode::WallClock) {
        meta.started = utc_timestamp();
    }

    const std::string prefix = cfg.nRuns > 1 ? "[run " + std::to_string(runIndex) + "] " : "";
    ReportWriter writer(out, console, prefix);
    writer.begin(meta);

    StopCondition stop = cfg.stop_condition();
    stop.interrupt = interrupt;
    RunResult result = run_portfolio(cfg.portfolio_settings(), problem, run_stream(cfg.seed, runIndex), stop,
                                     [&](const SweepReport& r) { writer.write_report_line(r); });
    writer.finish(result);
    return result;
}

}  // namespace evoport
