#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "evoport/core.hpp"
#include "evoport/paramless.hpp"
#include "evoport/problems.hpp"

namespace evoport {

/// Cost of one generation. workUnits is a deterministic proxy for CPU time.
struct GenCost {
    std::uint64_t wallNanos = 0;
    std::uint64_t workUnits = 0;
};

/// Work tallies. One work unit per fitness evaluation, per model-metric
/// evaluation (ECGA merge score, hBOA split score) and per sampled or
/// randomly generated individual.
struct WorkCounters {
    std::uint64_t fitnessCalls = 0;
    std::uint64_t metricEvals = 0;
    std::uint64_t samples = 0;

    std::uint64_t total() const noexcept { return fitnessCalls + metricEvals + samples; }
};

/// What an algorithm sees while running one generation on one population.
class GenerationContext {
public:
    GenerationContext(const ProblemInstance& problem, RngStream& rng, WorkCounters& work)
        : problem_(problem), rng_(rng), work_(work) {}

    const ProblemInstance& problem() const noexcept { return problem_; }
    RngStream& rng() noexcept { return rng_; }
    WorkCounters& work() noexcept { return work_; }

    double evaluate(Individual& ind);
    void evaluate_all(Population& pop);

    /// Best individual evaluated through this context, if any.
    const Individual* best() const noexcept { return best_ ? &*best_ : nullptr; }

private:
    const ProblemInstance& problem_;
    RngStream& rng_;
    WorkCounters& work_;
    std::optional<Individual> best_;
};

enum class EngineKind { Umda, Ecga, Hboa };

/// Complexity order used by the portfolio: UMDA < ECGA < hBOA.
int complexity_rank(EngineKind kind) noexcept;
std::string engine_name(EngineKind kind);

/// One generation of an estimation-of-distribution algorithm on a single
/// evaluated population.
class Algorithm {
public:
    virtual ~Algorithm() = default;
    virtual EngineKind kind() const noexcept = 0;
    virtual void run_generation(Population& pop, GenerationContext& ctx) const = 0;
};

/// Uniform contract every portfolio member exposes.
class Engine {
public:
    virtual ~Engine() = default;

    virtual std::string name() const = 0;
    virtual int rank() const = 0;

    virtual GenCost run_one_generation(const ProblemInstance& problem, RngStream& rng) = 0;

    virtual std::uint64_t fitness_calls() const = 0;
    virtual std::uint64_t work_units() const = 0;
    virtual bool has_statistics() const = 0;
    virtual double best_fitness() const = 0;
    virtual const Individual& best_individual() const = 0;
    virtual double best_average() const = 0;
    virtual std::vector<std::size_t> population_sizes() const = 0;
    virtual GenCost last_generation_cost() const = 0;
};

/// An algorithm run inside the parameter-less population ladder.
class ParameterlessEngine final : public Engine {
public:
    ParameterlessEngine(std::unique_ptr<Algorithm> algorithm, LadderParams ladder,
                        std::size_t stringSize);

    std::string name() const override { return engine_name(algorithm_->kind()); }
    int rank() const override { return complexity_rank(algorithm_->kind()); }

    /// Picks a level with the run counter, evaluates it if it is new, runs one
    /// generation of the algorithm on it and applies ladder elimination.
    GenCost run_one_generation(const ProblemInstance& problem, RngStream& rng) override;

    std::uint64_t fitness_calls() const override { return work_.fitnessCalls; }
    std::uint64_t work_units() const override { return work_.total(); }
    const WorkCounters& work() const noexcept { return work_; }
    bool has_statistics() const override { return bestIndividual_.has_value(); }
    double best_fitness() const override;
    const Individual& best_individual() const override;
    double best_average() const override { return ladder_.best_average(); }
    std::vector<std::size_t> population_sizes() const override { return ladder_.live_sizes(); }
    GenCost last_generation_cost() const override { return lastCost_; }

    const LevelLadder& ladder() const noexcept { return ladder_; }

private:
    std::unique_ptr<Algorithm> algorithm_;
    LevelLadder ladder_;
    WorkCounters work_;
    std::optional<Individual> bestIndividual_;
    GenCost lastCost_;
};

/// Tournament winner among the given contestant indices: maximal fitness,
/// lowest population index on ties.
std::size_t tournament_winner(std::span<const Individual> pop, std::span<const std::size_t> contestants);

/// count winners of independent s-ary tournaments, contestants drawn with replacement.
Population select_tournament(std::span<const Individual> pop, std::size_t s, std::size_t count,
                             RngStream& rng);

/// Keeps the eliteCount best parents and fills the rest of the population
/// with offspring, in order. offspring.size() must equal pop.size() - eliteCount.
void elitist_replace(Population& pop, Population offspring, std::size_t eliteCount);

}  // namespace evoport
