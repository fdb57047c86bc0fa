// evoport: run the UMDA/ECGA/hBOA portfolio on a configured problem.
//
//   evoport run PortParameters.txt [--seed S] [--runs K] [--max-evals N]
//                                  [--target F] [--max-sweeps M]
//                                  [--time-mode workunit|wallclock] [--out DIR]
//   evoport list-problems
//
// Exit status: 0 success, 1 usage or configuration error, 2 I/O error.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <unistd.h>

#include <CLI11.hpp>

#include "evoport/runner.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct RunOptions {
    std::string configPath;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> maxEvals;
    std::optional<double> target;
    std::optional<std::size_t> maxSweeps;
    std::optional<std::string> timeMode;
    std::optional<std::string> outDir;
    std::size_t jobs = 0;
};

int list_problems() {
    evoport::ProblemRegistry registry;
    for (const auto& entry : registry.catalog()) {
        std::cout << entry.id << ' ' << entry.name << '\n';
    }
    return 0;
}

int run(const RunOptions& opt) {
    using namespace evoport;
    PortfolioConfig cfg;
    ProblemRegistry registry;
    try {
        cfg = load_config(opt.configPath);
        if (opt.seed) cfg.seed = *opt.seed;
        if (opt.runs) cfg.nRuns = *opt.runs;
        if (opt.maxEvals) cfg.maxFitnessCalls = *opt.maxEvals;
        if (opt.target) cfg.targetFitness = *opt.target;
        if (opt.maxSweeps) cfg.maxSweeps = *opt.maxSweeps;
        if (opt.timeMode) cfg.timeMode = parse_time_mode(*opt.timeMode);
        if (opt.outDir) cfg.outputDir = *opt.outDir;
        validate(cfg, registry);
    } catch (const ConfigIoError& e) {
        std::cerr << "evoport: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "evoport: " << e.what() << '\n';
        return kExitConfig;
    }

    if (!cfg.stop_condition().bounded() && !isatty(STDIN_FILENO)) {
        std::cerr << "evoport: no stop condition set and no terminal attached; set maxFitnessCalls, "
                     "maxSweeps, targetFitness or maxWallSeconds\n";
        return kExitConfig;
    }

    std::vector<std::filesystem::path> paths;
    std::vector<std::ofstream> files(cfg.nRuns);
    try {
        std::filesystem::create_directories(cfg.outputDir);
        for (std::size_t k = 0; k < cfg.nRuns; ++k) {
            paths.push_back(output_file_name(cfg.problemType, k, cfg.outputDir));
            files[k].open(paths.back());
            if (!files[k]) {
                throw Error("cannot create output file '" + paths.back().string() + "'");
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "evoport: " << e.what() << '\n';
        return kExitIo;
    }

    std::signal(SIGINT, on_sigint);

    ConsoleMirror console(std::cout);
    std::atomic<std::size_t> next_run{0};
    std::atomic<int> status{0};
    auto worker = [&] {
        for (std::size_t k = next_run++; k < cfg.nRuns; k = next_run++) {
            try {
                const RunResult result = run_and_report(cfg, registry, k, files[k], &console, &g_interrupted);
                files[k].close();
                console.write("wrote " + paths[k].string() + " (best " + format_number(result.bestFitness) +
                              ", " + std::to_string(result.totalFitnessCalls) + " fitness calls, stop " +
                              to_string(result.stopReason) + ")\n");
            } catch (const std::exception& e) {
                console.write("evoport: run " + std::to_string(k) + ": " + e.what() + "\n");
                status = kExitIo;
            }
        }
    };

    std::size_t jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, cfg.nRuns);
    std::vector<std::thread> threads;
    for (std::size_t j = 1; j < jobs; ++j) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parameter-less EDA portfolio (UMDA, ECGA, hBOA) for bit-string problems"};
    app.require_subcommand(1);

    RunOptions opt;
    auto* run_cmd = app.add_subcommand("run", "Run the portfolio on the problem set up in a PortParameters file");
    run_cmd->add_option("config", opt.configPath, "Path to PortParameters.txt")->required();
    run_cmd->add_option("--seed", opt.seed, "Base seed; run k uses split k of it");
    run_cmd->add_option("--runs", opt.runs, "Number of independent runs")->check(CLI::PositiveNumber);
    run_cmd->add_option("--max-evals", opt.maxEvals, "Stop after this many fitness calls");
    run_cmd->add_option("--target", opt.target, "Stop once this fitness is reached");
    run_cmd->add_option("--max-sweeps", opt.maxSweeps, "Stop after this many sweeps");
    run_cmd->add_option("--time-mode", opt.timeMode, "Slice unit")
        ->check(CLI::IsMember({"workunit", "wallclock"}));
    run_cmd->add_option("--out", opt.outDir, "Directory for PORTFOLIO_<type>_<run>.txt files");
    run_cmd->add_option("--jobs", opt.jobs, "Runs executed in parallel (default: hardware threads)");

    auto* list_cmd = app.add_subcommand("list-problems", "Print the problem catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (list_cmd->parsed()) {
        return list_problems();
    }
    return run(opt);
}
