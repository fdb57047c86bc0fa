#include "evoport/paramless.hpp"

#include <algorithm>
#include <limits>

namespace evoport {

RunCounter::RunCounter(std::size_t ratio) : ratio_(ratio) {
    if (ratio_ < 2) {
        throw Error("RunCounter: run ratio must be at least 2");
    }
}

std::size_t RunCounter::next() {
    const std::size_t level = pending_;
    if (runs_.size() <= level) {
        runs_.resize(level + 1, 0);
    }
    if (++runs_[level] == ratio_) {
        runs_[level] = 0;
        pending_ = level + 1;
    } else {
        pending_ = 0;
    }
    return level;
}

void RunCounter::reset() {
    runs_.clear();
    pending_ = 0;
}

LevelLadder::LevelLadder(LadderParams params, std::size_t stringSize)
    : params_(params), stringSize_(stringSize), counter_(params.runRatio) {
    if (params_.initialSize < 2) {
        throw Error("LevelLadder: initial population size must be at least 2");
    }
    if (stringSize_ == 0) {
        throw Error("LevelLadder: string size must be at least 1");
    }
}

PopulationLevel& LevelLadder::append_level(RngStream& rng) {
    const std::size_t index = levels_.size();
    if (index >= std::numeric_limits<std::size_t>::digits - 1 ||
        params_.initialSize > (std::numeric_limits<std::size_t>::max() >> (index + 1))) {
        throw Error("LevelLadder: population size overflow");
    }
    PopulationLevel lvl;
    lvl.index = index;
    lvl.size = params_.initialSize << index;
    lvl.pop = new_random_population(lvl.size, stringSize_, rng);
    levels_.push_back(std::move(lvl));
    return levels_.back();
}

PopulationLevel& LevelLadder::next_level_to_run(RngStream& rng) {
    // The counter runs relative to the lowest index that can still run, so a
    // dead prefix of small populations does not have to be skipped one by one.
    std::size_t base = 0;
    while (base < levels_.size() && !levels_[base].alive) {
        ++base;
    }
    if (base != base_) {
        base_ = base;
        counter_.reset();
    }
    for (;;) {
        const std::size_t index = base_ + counter_.next();
        if (index == levels_.size()) {
            return append_level(rng);
        }
        if (levels_[index].alive) {
            return levels_[index];
        }
    }
}

void LevelLadder::record_generation(std::size_t index) {
    auto& lvl = levels_.at(index);
    ++lvl.generations;
    const double avg = average_fitness(lvl.pop);
    lvl.lastAvgFitness = avg;
    if (!bestAverage_ || avg > *bestAverage_) {
        bestAverage_ = avg;
    }
}

std::vector<std::size_t> LevelLadder::eliminate_dominated() {
    std::vector<std::size_t> killed;
    // Best average among live, already-run levels strictly above index i.
    std::optional<double> best_above;
    for (std::size_t k = levels_.size(); k-- > 0;) {
        auto& lvl = levels_[k];
        if (!lvl.alive) {
            continue;
        }
        bool kill = false;
        if (lvl.lastAvgFitness) {
            if (best_above && *best_above >= *lvl.lastAvgFitness) {
                kill = true;
            }
            if (lvl.generations > 0 && is_converged(lvl.pop)) {
                kill = true;
            }
        }
        if (kill) {
            lvl.alive = false;
            killed.push_back(k);
        } else if (lvl.lastAvgFitness &&
                   (!best_above || *lvl.lastAvgFitness > *best_above)) {
            best_above = lvl.lastAvgFitness;
        }
    }
    std::reverse(killed.begin(), killed.end());
    return killed;
}

bool LevelLadder::replenish(RngStream& rng) {
    if (live_count() > 0) {
        return false;
    }
    append_level(rng);
    return true;
}

double LevelLadder::best_average() const {
    if (!bestAverage_) {
        throw Error("ladder_best_average: no generation has completed yet");
    }
    return *bestAverage_;
}

std::vector<std::size_t> LevelLadder::live_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& lvl : levels_) {
        if (lvl.alive) {
            out.push_back(lvl.size);
        }
    }
    return out;
}

std::size_t LevelLadder::live_count() const {
    return static_cast<std::size_t>(
        std::count_if(levels_.begin(), levels_.end(), [](const auto& l) { return l.alive; }));
}

}  // namespace evoport
