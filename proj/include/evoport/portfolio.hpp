#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evoport/ecga.hpp"
#include "evoport/engine.hpp"
#include "evoport/hboa.hpp"
#include "evoport/umda.hpp"

namespace evoport {

enum class TimeMode { WorkUnit, WallClock };

std::string to_string(TimeMode mode);
TimeMode parse_time_mode(const std::string& text);

/// Cost of a generation in the schedule's unit (work units or nanoseconds).
double cost_in(const GenCost& cost, TimeMode mode) noexcept;

struct Schedule {
    double T = 1e4;   // current slice
    double T0 = 1e4;  // initial slice
    TimeMode mode = TimeMode::WorkUnit;
    std::size_t sweep = 0;

    static Schedule initial(double T0, TimeMode mode) { return {T0, T0, mode, 0}; }
};

struct PortfolioSlot {
    std::unique_ptr<Engine> engine;
    RngStream rng;
    bool active = true;
    std::optional<std::size_t> deactivatedAtSweep;
};

enum class StopReason { None, TargetReached, MaxFitnessCalls, MaxSweeps, MaxWallTime, Interrupted };
std::string to_string(StopReason reason);

struct StopCondition {
    std::optional<std::uint64_t> maxFitnessCalls;
    std::optional<std::size_t> maxSweeps;
    std::optional<double> targetFitness;
    std::optional<double> maxWallSeconds;
    /// Set from another thread (or a signal handler) to stop cleanly.
    const std::atomic<bool>* interrupt = nullptr;

    bool bounded() const noexcept {
        return maxFitnessCalls || maxSweeps || targetFitness || maxWallSeconds;
    }
};

/// State of one engine at the end of a sweep.
struct EngineSnapshot {
    std::string name;
    int rank = 0;
    bool active = true;
    std::size_t generations = 0;  // generations run in this sweep
    std::uint64_t fitnessCalls = 0;
    double bestFitness = 0.0;
    double bestAverage = 0.0;
    std::vector<std::size_t> populationSizes;
    /// Best bit string, present when it improved during this sweep.
    std::optional<std::string> improvedBest;
    /// Largest single-generation cost of this sweep, in schedule units.
    double maxGenerationCost = 0.0;
    /// Slice in effect when this engine's turn began.
    double turnSlice = 0.0;
};

struct SweepReport {
    std::size_t sweep = 0;
    double T = 0.0;       // slice given to every engine this sweep
    double nextT = 0.0;   // slice after the update rule
    bool complete = true; // false when a stop condition cut the sweep short
    std::vector<EngineSnapshot> engines;
    std::vector<std::string> deactivated;
};

/// Deactivates every active slot for which an active slot of higher rank has
/// a strictly larger best average. Returns the names deactivated.
std::vector<std::string> apply_deactivation(std::span<PortfolioSlot> slots, std::size_t sweep);

struct EngineSettings {
    LadderParams ladder;
    umda::Params umda;
    ecga::Params ecga;
    hboa::Params hboa;
};

/// The three parameter-less engines in complexity order.
std::vector<PortfolioSlot> make_default_slots(const EngineSettings& settings, std::size_t stringSize,
                                              const RngStream& base);

/// Round-robin scheduler over engines ordered by complexity rank.
class Portfolio {
public:
    Portfolio(std::vector<PortfolioSlot> slots, Schedule schedule);

    const Schedule& schedule() const noexcept { return schedule_; }
    std::span<const PortfolioSlot> slots() const noexcept { return slots_; }

    /// Gives each active engine, in rank order, whole generations until its
    /// accumulated cost reaches the slice T (at least one generation). Then
    /// raises T to the largest single-generation cost seen this sweep and
    /// applies deactivation. A stop condition firing between generations
    /// ends the sweep early; such a sweep is reported with complete = false
    /// and neither updates T nor deactivates anything.
    SweepReport run_sweep(const ProblemInstance& problem,
                          const std::function<bool()>& should_stop = {});

    std::uint64_t total_fitness_calls() const;
    /// Best individual over all engines (lowest rank wins ties).
    std::optional<Individual> best() const;

private:
    std::vector<PortfolioSlot> slots_;
    Schedule schedule_;
};

struct RunResult {
    Individual best;
    double bestFitness = 0.0;
    std::uint64_t totalFitnessCalls = 0;
    std::vector<SweepReport> history;
    StopReason stopReason = StopReason::None;
    double wallSeconds = 0.0;
    std::vector<EngineSnapshot> engines;
};

struct PortfolioSettings {
    EngineSettings engines;
    double T0 = 1e4;
    TimeMode mode = TimeMode::WorkUnit;
};

using SweepSink = std::function<void(const SweepReport&)>;

/// Runs sweeps until a stop condition fires. With no bound set the loop
/// only ends through the interrupt flag.
RunResult run_portfolio(const PortfolioSettings& settings, const ProblemInstance& problem,
                        const RngStream& rng, const StopCondition& stop, const SweepSink& sink = {});

/// Same loop over caller-provided slots.
RunResult run_portfolio(std::vector<PortfolioSlot> slots, Schedule schedule,
                        const ProblemInstance& problem, const StopCondition& stop,
                        const SweepSink& sink = {});

}  // namespace evoport
