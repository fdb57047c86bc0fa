#include "evoport/portfolio.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace evoport {

std::string to_string(TimeMode mode) {
    return mode == TimeMode::WorkUnit ? "workunit" : "wallclock";
}

TimeMode parse_time_mode(const std::string& text) {
    if (text == "workunit") return TimeMode::WorkUnit;
    if (text == "wallclock") return TimeMode::WallClock;
    throw Error("time mode must be 'workunit' or 'wallclock', got '" + text + "'");
}

double cost_in(const GenCost& cost, TimeMode mode) noexcept {
    return mode == TimeMode::WorkUnit ? static_cast<double>(cost.workUnits)
                                      : static_cast<double>(cost.wallNanos);
}

std::string to_string(StopReason reason) {
    switch (reason) {
    case StopReason::None: return "none";
    case StopReason::TargetReached: return "target";
    case StopReason::MaxFitnessCalls: return "max-fitness-calls";
    case StopReason::MaxSweeps: return "max-sweeps";
    case StopReason::MaxWallTime: return "max-wall-time";
    case StopReason::Interrupted: return "interrupted";
    }
    return "none";
}

std::vector<std::string> apply_deactivation(std::span<PortfolioSlot> slots, std::size_t sweep) {
    std::vector<bool> drop(slots.size(), false);
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto& si = slots[i];
        if (!si.active || !si.engine->has_statistics()) {
            continue;
        }
        for (std::size_t j = 0; j < slots.size(); ++j) {
            const auto& sj = slots[j];
            if (sj.active && sj.engine->has_statistics() && sj.engine->rank() > si.engine->rank() &&
                sj.engine->best_average() > si.engine->best_average()) {
                drop[i] = true;
                break;
            }
        }
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (drop[i]) {
            slots[i].active = false;
            slots[i].deactivatedAtSweep = sweep;
            names.push_back(slots[i].engine->name());
        }
    }
    return names;
}

std::vector<PortfolioSlot> make_default_slots(const EngineSettings& settings, std::size_t stringSize,
                                              const RngStream& base) {
    std::vector<PortfolioSlot> slots;
    auto add = [&](std::unique_ptr<Algorithm> algorithm) {
        const auto rank = static_cast<std::uint64_t>(complexity_rank(algorithm->kind()));
        slots.push_back(PortfolioSlot{
            std::make_unique<ParameterlessEngine>(std::move(algorithm), settings.ladder, stringSize),
            base.split(rank), true, std::nullopt});
    };
    add(std::make_unique<umda::UmdaAlgorithm>(settings.umda));
    add(std::make_unique<ecga::EcgaAlgorithm>(settings.ecga));
    add(std::make_unique<hboa::HboaAlgorithm>(settings.hboa));
    return slots;
}

Portfolio::Portfolio(std::vector<PortfolioSlot> slots, Schedule schedule)
    : slots_(std::move(slots)), schedule_(schedule) {
    if (slots_.empty()) {
        throw Error("Portfolio: at least one engine is required");
    }
    if (!(schedule_.T0 > 0.0) || schedule_.T < schedule_.T0) {
        throw Error("Portfolio: the initial slice must be positive");
    }
    std::stable_sort(slots_.begin(), slots_.end(), [](const PortfolioSlot& a, const PortfolioSlot& b) {
        return a.engine->rank() < b.engine->rank();
    });
}

namespace {

EngineSnapshot snapshot(const PortfolioSlot& slot) {
    EngineSnapshot s;
    s.name = slot.engine->name();
    s.rank = slot.engine->rank();
    s.active = slot.active;
    s.fitnessCalls = slot.engine->fitness_calls();
    if (slot.engine->has_statistics()) {
        s.bestFitness = slot.engine->best_fitness();
        s.bestAverage = slot.engine->best_average();
    }
    s.populationSizes = slot.engine->population_sizes();
    return s;
}

}  // namespace

SweepReport Portfolio::run_sweep(const ProblemInstance& problem, const std::function<bool()>& should_stop) {
    SweepReport report;
    report.sweep = schedule_.sweep;
    report.T = schedule_.T;

    struct Turn {
        std::size_t slot;
        std::size_t generations = 0;
        double maxCost = 0.0;
        double slice = 0.0;
        std::optional<std::string> improved;
    };
    std::vector<Turn> turns;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (slots_[i].active) {
            Turn turn;
            turn.slot = i;
            turns.push_back(turn);
        }
    }
    if (turns.empty()) {
        throw Error("run_sweep: no active engine");
    }

    bool stopped = false;
    double max_generation = 0.0;
    for (auto& turn : turns) {
        if (stopped) {
            break;
        }
        auto& slot = slots_[turn.slot];
        Engine& engine = *slot.engine;
        const std::optional<double> before =
            engine.has_statistics() ? std::optional<double>(engine.best_fitness()) : std::nullopt;
        turn.slice = schedule_.T;
        double used = 0.0;
        do {
            const double c = cost_in(engine.run_one_generation(problem, slot.rng), schedule_.mode);
            used += c;
            ++turn.generations;
            turn.maxCost = std::max(turn.maxCost, c);
            if (should_stop && should_stop()) {
                stopped = true;
                break;
            }
        } while (used < turn.slice);
        max_generation = std::max(max_generation, turn.maxCost);
        if (!before || engine.best_fitness() > *before) {
            turn.improved = engine.best_individual().to_string();
        }
    }

    report.complete = !stopped;
    if (report.complete) {
        schedule_.T = std::max(schedule_.T, max_generation);
        report.deactivated = apply_deactivation(slots_, schedule_.sweep);
    }
    report.nextT = schedule_.T;
    for (const auto& turn : turns) {
        const auto& slot = slots_[turn.slot];
        if (!slot.engine->has_statistics()) {
            continue;
        }
        EngineSnapshot s = snapshot(slot);
        s.generations = turn.generations;
        s.maxGenerationCost = turn.maxCost;
        s.turnSlice = turn.slice;
        s.improvedBest = turn.improved;
        report.engines.push_back(std::move(s));
    }
    ++schedule_.sweep;
    return report;
}

std::uint64_t Portfolio::total_fitness_calls() const {
    std::uint64_t total = 0;
    for (const auto& slot : slots_) {
        total += slot.engine->fitness_calls();
    }
    return total;
}

std::optional<Individual> Portfolio::best() const {
    const Individual* best = nullptr;
    for (const auto& slot : slots_) {
        if (slot.engine->has_statistics()) {
            const Individual& candidate = slot.engine->best_individual();
            if (!best || candidate.fitness() > best->fitness()) {
                best = &candidate;
            }
        }
    }
    return best ? std::optional<Individual>(*best) : std::nullopt;
}

RunResult run_portfolio(const PortfolioSettings& settings, const ProblemInstance& problem,
                        const RngStream& rng, const StopCondition& stop, const SweepSink& sink) {
    return run_portfolio(make_default_slots(settings.engines, problem.spec().stringSize, rng),
                         Schedule::initial(settings.T0, settings.mode), problem, stop, sink);
}

RunResult run_portfolio(std::vector<PortfolioSlot> slots, Schedule schedule,
                        const ProblemInstance& problem, const StopCondition& stop,
                        const SweepSink& sink) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed_seconds = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    Portfolio portfolio(std::move(slots), schedule);
    RunResult result;
    StopReason reason = StopReason::None;

    auto check = [&]() -> bool {
        if (stop.interrupt && stop.interrupt->load(std::memory_order_relaxed)) {
            reason = StopReason::Interrupted;
        } else if (stop.targetFitness) {
            if (auto best = portfolio.best(); best && best->fitness() >= *stop.targetFitness) {
                reason = StopReason::TargetReached;
            }
        }
        if (reason == StopReason::None && stop.maxFitnessCalls &&
            portfolio.total_fitness_calls() >= *stop.maxFitnessCalls) {
            reason = StopReason::MaxFitnessCalls;
        }
        if (reason == StopReason::None && stop.maxWallSeconds && elapsed_seconds() >= *stop.maxWallSeconds) {
            reason = StopReason::MaxWallTime;
        }
        return reason != StopReason::None;
    };

    while (true) {
        if (stop.maxSweeps && result.history.size() >= *stop.maxSweeps) {
            reason = StopReason::MaxSweeps;
            break;
        }
        if (check()) {
            break;
        }
        auto report = portfolio.run_sweep(problem, check);
        if (sink) {
            sink(report);
        }
        result.history.push_back(std::move(report));
        if (reason != StopReason::None) {
            break;
        }
    }

    result.stopReason = reason;
    if (auto best = portfolio.best()) {
        result.best = *best;
        result.bestFitness = best->fitness();
    }
    result.totalFitnessCalls = portfolio.total_fitness_calls();
    for (const auto& slot : portfolio.slots()) {
        result.engines.push_back(snapshot(slot));
    }
    result.wallSeconds = elapsed_seconds();
    return result;
}

}  // namespace evoport
