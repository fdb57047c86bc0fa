#include "evoport/engine.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace evoport {

double GenerationContext::evaluate(Individual& ind) {
    const double f = problem_.compute_fitness(ind, rng_);
    ++work_.fitnessCalls;
    if (!best_ || f > best_->fitness()) {
        best_ = ind;
    }
    return f;
}

void GenerationContext::evaluate_all(Population& pop) {
    for (auto& ind : pop) {
        evaluate(ind);
    }
}

int complexity_rank(EngineKind kind) noexcept {
    switch (kind) {
    case EngineKind::Umda: return 0;
    case EngineKind::Ecga: return 1;
    case EngineKind::Hboa: return 2;
    }
    return -1;
}

std::string engine_name(EngineKind kind) {
    switch (kind) {
    case EngineKind::Umda: return "UMDA";
    case EngineKind::Ecga: return "ECGA";
    case EngineKind::Hboa: return "HBOA";
    }
    return "?";
}

ParameterlessEngine::ParameterlessEngine(std::unique_ptr<Algorithm> algorithm, LadderParams ladder,
                                         std::size_t stringSize)
    : algorithm_(std::move(algorithm)), ladder_(ladder, stringSize) {
    if (!algorithm_) {
        throw Error("ParameterlessEngine: null algorithm");
    }
}

GenCost ParameterlessEngine::run_one_generation(const ProblemInstance& problem, RngStream& rng) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t units_before = work_.total();

    GenerationContext ctx(problem, rng, work_);
    PopulationLevel& level = ladder_.next_level_to_run(rng);
    const std::size_t index = level.index;
    if (level.generations == 0 && !level.pop.empty() && !level.pop.front().evaluated()) {
        work_.samples += level.pop.size();
        ctx.evaluate_all(level.pop);
    }
    algorithm_->run_generation(level.pop, ctx);
    ladder_.record_generation(index);
    ladder_.eliminate_dominated();
    // A replacement level is generated here but charged when it first runs.
    ladder_.replenish(rng);

    if (const Individual* best = ctx.best();
        best && (!bestIndividual_ || best->fitness() > bestIndividual_->fitness())) {
        bestIndividual_ = *best;
    }

    const auto elapsed = std::chrono::steady_clock::now() - start;
    lastCost_.wallNanos = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count());
    lastCost_.workUnits = work_.total() - units_before;
    return lastCost_;
}

double ParameterlessEngine::best_fitness() const { return best_individual().fitness(); }

const Individual& ParameterlessEngine::best_individual() const {
    if (!bestIndividual_) {
        throw Error(name() + ": no individual has been evaluated yet");
    }
    return *bestIndividual_;
}

std::size_t tournament_winner(std::span<const Individual> pop, std::span<const std::size_t> contestants) {
    if (pop.empty() || contestants.empty()) {
        throw Error("tournament: empty population");
    }
    std::size_t winner = contestants.front();
    for (std::size_t c : contestants) {
        const double fc = pop[c].fitness();
        const double fw = pop[winner].fitness();
        if (fc > fw || (fc == fw && c < winner)) {
            winner = c;
        }
    }
    return winner;
}

Population select_tournament(std::span<const Individual> pop, std::size_t s, std::size_t count,
                             RngStream& rng) {
    if (pop.empty()) {
        throw Error("select_tournament: empty population");
    }
    if (s < 1) {
        throw Error("select_tournament: tournament size must be positive");
    }
    Population out;
    out.reserve(count);
    std::vector<std::size_t> contestants(s);
    for (std::size_t i = 0; i < count; ++i) {
        for (auto& c : contestants) {
            c = rng.below(pop.size());
        }
        out.push_back(pop[tournament_winner(pop, contestants)]);
    }
    return out;
}

void elitist_replace(Population& pop, Population offspring, std::size_t eliteCount) {
    if (eliteCount > pop.size() || offspring.size() + eliteCount != pop.size()) {
        throw Error("elitist_replace: offspring count does not match population size");
    }
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pop[a].fitness() > pop[b].fitness();
    });
    Population next;
    next.reserve(pop.size());
    for (std::size_t e = 0; e < eliteCount; ++e) {
        next.push_back(std::move(pop[order[e]]));
    }
    for (auto& child : offspring) {
        next.push_back(std::move(child));
    }
    pop = std::move(next);
}

}  // namespace evoport
