#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "evoport/core.hpp"

namespace evoport {

/// Base-m run counter of the parameter-less population ladder.
///
/// Level i+1 runs once after every m runs of level i, which produces the
/// sequence R(k) = R(k-1) repeated m times followed by k, with R(0) = 0:
///   m = 2:  0 0 1 0 0 1 2 0 0 1 0 0 1 2 3 ...
class RunCounter {
public:
    explicit RunCounter(std::size_t ratio);

    std::size_t ratio() const noexcept { return ratio_; }

    /// Level index for the next run.
    std::size_t next();
    void reset();

private:
    std::size_t ratio_;
    std::vector<std::size_t> runs_;
    std::size_t pending_ = 0;
};

struct PopulationLevel {
    std::size_t index = 0;
    std::size_t size = 0;
    Population pop;
    std::size_t generations = 0;
    std::optional<double> lastAvgFitness;
    bool alive = true;
};

struct LadderParams {
    std::size_t initialSize = 16;  // N0
    std::size_t runRatio = 4;      // m
};

/// Ladder of populations with sizes N0 * 2^i. Smaller populations run more
/// often; a population is dropped once a larger one has an average fitness
/// at least as good, or once it has fully converged.
class LevelLadder {
public:
    LevelLadder(LadderParams params, std::size_t stringSize);

    const LadderParams& params() const noexcept { return params_; }
    std::span<const PopulationLevel> levels() const noexcept { return levels_; }
    PopulationLevel& level(std::size_t index) { return levels_.at(index); }

    /// Level chosen by the run counter, skipping dead levels. Creates a new
    /// randomly initialized (unevaluated) level of double size when the
    /// counter first reaches an index past the end of the ladder.
    PopulationLevel& next_level_to_run(RngStream& rng);

    /// Records a completed generation of a level: bumps its generation count,
    /// stores its current average fitness and updates the running best average.
    void record_generation(std::size_t index);

    /// Kills every live level that is dominated by a larger live level
    /// (average >= its own) or whose population has converged. Returns the
    /// indices killed, in increasing order.
    std::vector<std::size_t> eliminate_dominated();

    /// Appends a fresh level when elimination left no live level. Returns
    /// whether a level was added.
    bool replenish(RngStream& rng);

    bool has_best_average() const noexcept { return bestAverage_.has_value(); }
    /// Running maximum of every recorded level average. Throws before the
    /// first recorded generation.
    double best_average() const;

    std::vector<std::size_t> live_sizes() const;
    std::size_t live_count() const;

private:
    PopulationLevel& append_level(RngStream& rng);

    LadderParams params_;
    std::size_t stringSize_;
    std::vector<PopulationLevel> levels_;
    RunCounter counter_;
    std::size_t base_ = 0;
    std::optional<double> bestAverage_;
};

}  // namespace evoport
