#include <doctest.h>

#include "evoport/paramless.hpp"
#include "oracles.hpp"

using namespace evoport;

namespace {

void evaluate_level(PopulationLevel& level, double value) {
    for (auto& ind : level.pop) ind.set_fitness(value);
}

// Makes a level non-converged so only averages decide elimination.
// Call before assigning fitness: changing an allele clears it.
void diversify(PopulationLevel& level) {
    level.pop[0].set_allele(0, 1 - level.pop[0].allele(0));
    level.pop[1].set_allele(0, 1 - level.pop[0].allele(0));
}

}  // namespace

TEST_CASE("run counter matches the recursive sequence") {
    for (std::size_t m : {2, 3, 4, 5}) {
        RunCounter counter(m);
        const auto expected = oracle::counter_sequence(m, 10000);
        for (std::size_t k = 0; k < expected.size(); ++k) {
            REQUIRE(counter.next() == expected[k]);
        }
    }
    CHECK_THROWS_AS(RunCounter(1), Error);
}

TEST_CASE("counter frequencies follow the closed form") {
    const std::size_t m = 4, K = 10000;
    RunCounter counter(m);
    const auto seq = oracle::counter_sequence(m, K);
    std::vector<std::size_t> freq(16, 0);
    for (std::size_t k = 0; k < K; ++k) ++freq[counter.next()];
    // A prefix is a concatenation of whole blocks, each within one of the
    // asymptotic share (m - 1) / m^(i+1), so the error stays small.
    double share = static_cast<double>(m - 1) / static_cast<double>(m);
    for (std::size_t i = 0; i < freq.size(); ++i, share /= static_cast<double>(m)) {
        REQUIRE(freq[i] == static_cast<std::size_t>(std::count(seq.begin(), seq.end(), i)));
        CHECK(std::abs(static_cast<double>(freq[i]) - share * K) <= 22.0);
    }
}

TEST_CASE("ladder selection order") {
    LevelLadder ladder({16, 4}, 8);
    RngStream rng(1);
    std::vector<std::size_t> seq;
    for (int k = 0; k < 21; ++k) {
        auto& level = ladder.next_level_to_run(rng);
        seq.push_back(level.index);
        CHECK(level.size == 16u << level.index);
        CHECK(level.pop.size() == level.size);
        diversify(level);
        evaluate_level(level, 1.0);
    }
    CHECK(std::vector<std::size_t>(seq.begin(), seq.begin() + 4) == std::vector<std::size_t>(4, 0));
    CHECK(seq[4] == 1);
    CHECK(std::count(seq.begin(), seq.end(), 0) == 16);
    CHECK(std::count(seq.begin(), seq.end(), 1) == 4);
    CHECK(std::count(seq.begin(), seq.end(), 2) == 1);
}

TEST_CASE("elimination") {
    RngStream rng(2);
    auto make = [&](double a0, double a1) {
        LevelLadder ladder({16, 2}, 8);
        for (int k = 0; k < 3; ++k) {
            auto& level = ladder.next_level_to_run(rng);
            diversify(level);
            evaluate_level(level, level.index == 0 ? a0 : a1);
            ladder.record_generation(level.index);
        }
        return ladder;
    };
    {
        auto ladder = make(5.0, 5.0);
        CHECK(ladder.eliminate_dominated() == std::vector<std::size_t>{0});
        CHECK_FALSE(ladder.levels()[0].alive);
    }
    {
        auto ladder = make(7.0, 5.0);
        CHECK(ladder.eliminate_dominated().empty());
        CHECK(ladder.live_count() == 2);
        CHECK(ladder.best_average() == 7.0);
    }
    {
        LevelLadder ladder({16, 4}, 8);
        auto& level = ladder.next_level_to_run(rng);
        for (auto& ind : level.pop) ind = Individual::from_string("00000000");
        evaluate_level(level, 1.0);
        ladder.record_generation(0);
        CHECK(ladder.eliminate_dominated() == std::vector<std::size_t>{0});
        CHECK(ladder.live_count() == 0);
        CHECK(ladder.replenish(rng));
        CHECK(ladder.live_count() == 1);
        CHECK(ladder.live_sizes() == std::vector<std::size_t>{32});
    }
}

TEST_CASE("best average is a running maximum") {
    RngStream rng(3);
    LevelLadder ladder({16, 4}, 8);
    CHECK_FALSE(ladder.has_best_average());
    CHECK_THROWS_AS(ladder.best_average(), Error);
    auto& level = ladder.next_level_to_run(rng);
    evaluate_level(level, 4.0);
    ladder.record_generation(0);
    CHECK(ladder.best_average() == 4.0);
    evaluate_level(ladder.level(0), 3.5);
    ladder.record_generation(0);
    CHECK(ladder.best_average() == 4.0);
    CHECK(*ladder.levels()[0].lastAvgFitness == 3.5);
}

TEST_CASE("random ladder runs keep the size and ordering invariants") {
    RngStream rng(4);
    LevelLadder ladder({16, 3}, 6);
    double last_best = -1e300;
    for (int step = 0; step < 400 && (ladder.levels().empty() || ladder.levels().back().size <= 4096); ++step) {
        auto& level = ladder.next_level_to_run(rng);
        REQUIRE(level.alive);
        for (auto& ind : level.pop) ind.set_fitness(rng.uniform() * 10.0 + static_cast<double>(level.index));
        ladder.record_generation(level.index);
        ladder.eliminate_dominated();
        ladder.replenish(rng);
        REQUIRE(ladder.best_average() >= last_best);
        last_best = ladder.best_average();
        const auto levels = ladder.levels();
        for (const auto& l : levels) REQUIRE(l.size == (16u << l.index));
        for (std::size_t i = 0; i < levels.size(); ++i) {
            for (std::size_t j = i + 1; j < levels.size(); ++j) {
                if (levels[i].alive && levels[j].alive && levels[i].lastAvgFitness && levels[j].lastAvgFitness) {
                    REQUIRE(*levels[i].lastAvgFitness > *levels[j].lastAvgFitness);
                }
            }
        }
        REQUIRE(ladder.live_count() >= 1);
    }
}
