#include <doctest.h>

#include <algorithm>
#include <vector>

#include "evoport/core.hpp"

using namespace evoport;

namespace {

Population with_fitness(std::initializer_list<double> values) {
    Population pop;
    for (double v : values) {
        Individual ind(std::vector<std::uint8_t>{0});
        ind.set_fitness(v);
        pop.push_back(ind);
    }
    return pop;
}

}  // namespace

TEST_CASE("rng streams are reproducible and independent after split") {
    RngStream a(123), b(123);
    for (int i = 0; i < 100000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
    RngStream base(5);
    RngStream s0 = base.split(0), s1 = base.split(1);
    int equal = 0;
    for (int i = 0; i < 1000; ++i) equal += s0.next_u64() == s1.next_u64();
    CHECK(equal == 0);

    RngStream r(9);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(r.below(7) < 7);
    }
    CHECK_THROWS_AS(r.below(0), Error);
}

TEST_CASE("gaussian draws have unit variance") {
    RngStream r(77);
    const int n = 200000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double g = r.gaussian();
        sum += g;
        sq += g * g;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("new_random_individual") {
    RngStream r1(42), r2(42);
    const Individual a = new_random_individual(5, r1);
    const Individual b = new_random_individual(5, r2);
    CHECK(a.same_bits(b));
    CHECK_FALSE(a.evaluated());
    CHECK_THROWS_AS(new_random_individual(0, r1), Error);

    RngStream r(7);
    const Individual big = new_random_individual(10000, r);
    const double mean = static_cast<double>(unitation(big.bits())) / 10000.0;
    CHECK(mean >= 0.45);
    CHECK(mean <= 0.55);

    const Individual one = new_random_individual(1, r);
    CHECK(one.size() == 1);
    CHECK((one.to_string() == "0" || one.to_string() == "1"));
}

TEST_CASE("individual basics") {
    Individual ind = Individual::from_string("101 10");
    CHECK(ind.to_string() == "10110");
    CHECK(ind.allele(1) == 0);
    CHECK_THROWS_AS(ind.fitness(), Error);
    ind.set_fitness(3.0);
    CHECK(ind.evaluated());
    ind.set_allele(1, 1);
    CHECK_FALSE(ind.evaluated());
    CHECK(ind.complement().to_string() == "00001");
    CHECK(hamming_distance(ind, ind.complement()) == 5);
    CHECK_THROWS_AS(Individual(std::vector<std::uint8_t>{0, 2}), Error);
    CHECK_THROWS_AS(Individual::from_string("10x"), Error);
}

TEST_CASE("average_fitness") {
    CHECK(average_fitness(with_fitness({2.0})) == doctest::Approx(2.0));
    CHECK(average_fitness(with_fitness({1.0, 3.0})) == doctest::Approx(2.0));
    CHECK(average_fitness(with_fitness({0.9, 0.8, 1.0, 0.0})) == doctest::Approx(0.675));
    CHECK_THROWS_AS(average_fitness(Population{}), Error);

    RngStream r(3);
    Population pop;
    for (int i = 0; i < 500; ++i) {
        Individual ind(std::vector<std::uint8_t>{0});
        ind.set_fitness(r.uniform() * 100.0 - 50.0);
        pop.push_back(ind);
    }
    const double avg = average_fitness(pop);
    auto [lo, hi] = std::minmax_element(pop.begin(), pop.end(),
                                        [](auto& a, auto& b) { return a.fitness() < b.fitness(); });
    CHECK(lo->fitness() <= avg);
    CHECK(avg <= hi->fitness());
}

TEST_CASE("best_of uses lowest index on ties") {
    CHECK(best_index(with_fitness({5, 5, 3})) == 0);
    CHECK(best_index(with_fitness({1, 9, 3})) == 1);

    RngStream r(11);
    Population pop;
    for (int i = 0; i < 1000; ++i) {
        Individual ind(std::vector<std::uint8_t>{0});
        ind.set_fitness(static_cast<double>(r.below(100)));
        pop.push_back(ind);
    }
    std::size_t oracle = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (pop[i].fitness() > pop[oracle].fitness()) oracle = i;
    }
    CHECK(best_index(pop) == oracle);
    CHECK(best_of(pop).fitness() == pop[oracle].fitness());
}

TEST_CASE("convergence") {
    Population pop(3, Individual::from_string("0110"));
    CHECK(is_converged(pop));
    pop[2].set_allele(0, 1);
    CHECK_FALSE(is_converged(pop));
}
