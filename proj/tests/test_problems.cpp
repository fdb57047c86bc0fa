#include <doctest.h>

#include <cmath>

#include "evoport/problems.hpp"
#include "oracles.hpp"

using namespace evoport;

namespace {

double fit(const ProblemRegistry& reg, int id, const std::string& bits, ProblemOptions opts = {}) {
    const Individual ind = Individual::from_string(bits);
    return reg.lookup(id, ind.size(), 0.0, opts).base_fitness(ind);
}

Individual from_int(unsigned value, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = (value >> i) & 1u;
    return Individual(bits);
}

struct LeadingOnes final : Problem {
    std::string name() const override { return "LeadingOnes"; }
    double compute_fitness(const Individual& ind) const override {
        std::size_t k = 0;
        while (k < ind.size() && ind.allele(k) == 1) ++k;
        return static_cast<double>(k);
    }
};

}  // namespace

TEST_CASE("catalog lookups") {
    ProblemRegistry reg;
    CHECK(reg.lookup(0, 30, 0).name() == "ZeroMax");
    CHECK(reg.lookup(10, 30, 0).name() == "OneMax");
    CHECK(reg.lookup(21, 27, 0).name() == "HierarchicalTrapOne");
    CHECK(reg.catalog().size() == 16);
    CHECK_THROWS_AS(reg.lookup(98, 10, 0), UnknownProblem);
    CHECK_THROWS_AS(reg.lookup(21, 30, 0), IncompatibleSize);
    CHECK_THROWS_AS(reg.lookup(12, 10, 0), IncompatibleSize);
    CHECK_THROWS_AS(reg.lookup(14, 10, 0), IncompatibleSize);
    CHECK_NOTHROW(reg.lookup(15, 30, 0));
    CHECK_THROWS_AS(reg.lookup(15, 30, 0, {4}), IncompatibleSize);
}

TEST_CASE("fitness examples") {
    ProblemRegistry reg;
    CHECK(fit(reg, 10, "10110") == 3.0);
    CHECK(fit(reg, 0, "00000") == 5.0);
    CHECK(fit(reg, 12, "111000101") == doctest::Approx(1.9));
    CHECK(fit(reg, 15, "1111100000") == 9.0);
    CHECK(fit(reg, 15, "111000", {3}) == 3.0 + 2.0);
}

TEST_CASE("block payoffs") {
    CHECK(block_deceptive3(3) == 1.0);
    CHECK(block_deceptive3(0) == 0.9);
    CHECK(block_deceptive3(2) == 0.0);
    CHECK(block_deceptive3(1) == 0.8);
    CHECK(block_trap_k(5, 5) == 5);
    CHECK(block_trap_k(0, 5) == 4);
    CHECK(block_trap_k(2, 5) == 2);
    CHECK(block_quadratic(1, 1) == 1.0);
    CHECK(block_quadratic(0, 0) == 0.9);
    CHECK(block_quadratic(0, 1) == 0.0);
    CHECK(block_bipolar6(0) == 1.0);
    CHECK(block_bipolar6(6) == 1.0);
    CHECK(block_bipolar6(3) == 0.9);
}

TEST_CASE("overlapping and uniform blocks") {
    auto bits = [](const std::string& s) { return Individual::from_string(s); };
    CHECK(overlapping_deceptive3(bits("11111").bits()) == doctest::Approx(2.0));
    CHECK(overlapping_deceptive3(bits("00000").bits()) == doctest::Approx(1.8));
    CHECK(overlapping_deceptive3(bits("11100").bits()) == doctest::Approx(1.8));
    CHECK(uniform_blocks6(bits("111111000000").bits()) == 1);
    CHECK(uniform_blocks6(bits("111111111111").bits()) == 2);
    CHECK(uniform_blocks6(bits("000000111111").bits(), Polarity::Zero) == 1);
}

TEST_CASE("block problems are sums of their blocks") {
    ProblemRegistry reg;
    RngStream rng(8);
    for (int i = 0; i < 200; ++i) {
        const Individual x = new_random_individual(30, rng);
        double quad = 0, dec = 0, bip = 0, trap = 0;
        for (std::size_t b = 0; b < 30; b += 2) quad += block_quadratic(x.allele(b), x.allele(b + 1));
        for (std::size_t b = 0; b < 30; b += 3)
            dec += block_deceptive3(x.allele(b) + x.allele(b + 1) + x.allele(b + 2));
        for (std::size_t b = 0; b < 30; b += 6) {
            int u = 0;
            for (int k = 0; k < 6; ++k) u += x.allele(b + k);
            bip += block_bipolar6(u);
        }
        for (std::size_t b = 0; b < 30; b += 5) {
            int u = 0;
            for (int k = 0; k < 5; ++k) u += x.allele(b + k);
            trap += block_trap_k(u, 5);
        }
        REQUIRE(reg.lookup(11, 30, 0).base_fitness(x) == doctest::Approx(quad));
        REQUIRE(reg.lookup(12, 30, 0).base_fitness(x) == doctest::Approx(dec));
        REQUIRE(reg.lookup(13, 30, 0).base_fitness(x) == doctest::Approx(bip));
        REQUIRE(reg.lookup(15, 30, 0).base_fitness(x) == doctest::Approx(trap));

        const Individual y = new_random_individual(31, rng);
        double over = 0;
        for (std::size_t b = 0; b + 2 < 31; b += 2)
            over += block_deceptive3(y.allele(b) + y.allele(b + 1) + y.allele(b + 2));
        REQUIRE(reg.lookup(14, 31, 0).base_fitness(y) == doctest::Approx(over));
    }
}

TEST_CASE("max problems have their optimum at the constant string") {
    ProblemRegistry reg;
    const std::size_t n = 12;
    double best_one = -1, best_zero = -1;
    unsigned arg_one = 0, arg_zero = 0;
    for (unsigned v = 0; v < (1u << n); ++v) {
        const Individual x = from_int(v, n);
        const double f1 = reg.lookup(10, n, 0).base_fitness(x);
        const double f0 = reg.lookup(0, n, 0).base_fitness(x);
        if (f1 > best_one) best_one = f1, arg_one = v;
        if (f0 > best_zero) best_zero = f0, arg_zero = v;
    }
    CHECK(arg_one == (1u << n) - 1);
    CHECK(arg_zero == 0);
}

TEST_CASE("hierarchical trap") {
    ProblemRegistry reg;
    for (int id : {21, 22}) {
        const auto inst = reg.lookup(id, 9, 0);
        double best = -1;
        unsigned arg = 0, ties = 0;
        for (unsigned v = 0; v < 512; ++v) {
            const double f = inst.base_fitness(from_int(v, 9));
            if (f > best + 1e-12) {
                best = f, arg = v, ties = 1;
            } else if (std::abs(f - best) <= 1e-12) {
                ++ties;
            }
        }
        CHECK(arg == 511);
        CHECK(ties == 1);
        CHECK(inst.base_fitness(from_int(0, 9)) < best);
    }
    // All ones: each level contributes n, so the optimum is n * L.
    CHECK(reg.lookup(21, 27, 0).base_fitness(Individual(std::vector<std::uint8_t>(27, 1))) ==
          doctest::Approx(81.0));
    // A mixed triplet contributes nothing above level 0.
    const Individual mixed = Individual::from_string("110111111");
    const Individual zeroed = Individual::from_string("000111111");
    const double f_mixed = reg.lookup(21, 9, 0).base_fitness(mixed);
    CHECK(f_mixed < reg.lookup(21, 9, 0).base_fitness(zeroed));
}

TEST_CASE("polarity duality on the catalog") {
    ProblemRegistry reg;
    RngStream rng(2);
    const std::pair<int, std::size_t> pairs[] = {{0, 30}, {1, 30}, {2, 30}, {3, 30}, {4, 31}, {5, 30}, {6, 30}};
    for (auto [id, n] : pairs) {
        const auto zero = reg.lookup(id, n, 0);
        const auto one = reg.lookup(id + 10, n, 0);
        for (int i = 0; i < 500; ++i) {
            const Individual x = new_random_individual(n, rng);
            REQUIRE(one.base_fitness(x) == zero.base_fitness(x.complement()));
        }
    }
}

TEST_CASE("noise") {
    ProblemRegistry reg;
    const auto inst = reg.lookup(10, 20, 0.5);
    RngStream rng(4);
    Individual x = new_random_individual(20, rng);
    const double base = inst.base_fitness(x);
    double sum = 0, sq = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const double f = inst.compute_fitness(x, rng);
        REQUIRE(x.evaluated());
        sum += f;
        sq += f * f;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sq - n * mean * mean) / (n - 1));
    CHECK(std::abs(mean - base) < 4 * 0.5 / 100);
    CHECK(std::abs(sd - 0.5) < 0.05);

    const auto quiet = reg.lookup(10, 20, 0.0);
    CHECK(quiet.compute_fitness(x, rng) == base);
}

TEST_CASE("plugin registration") {
    ProblemRegistry reg;
    reg.register_problem(99, "LeadingOnes", [](const ProblemSpec&) { return std::make_shared<LeadingOnes>(); });
    CHECK(reg.contains(99));
    CHECK_FALSE(reg.is_builtin(99));
    const auto inst = reg.lookup(99, 6, 0);
    CHECK(inst.name() == "LeadingOnes");
    CHECK(inst.base_fitness(Individual::from_string("111011")) == 3.0);
    CHECK_THROWS_AS(reg.register_problem(0, "X", [](const ProblemSpec&) { return std::make_shared<LeadingOnes>(); }),
                    DuplicateProblemId);
    CHECK_THROWS_AS(reg.lookup(98, 6, 0), UnknownProblem);
    CHECK_THROWS_AS(inst.base_fitness(Individual::from_string("11")), Error);
}

TEST_CASE("lookup is a pure function of its arguments") {
    ProblemRegistry reg;
    RngStream rng(6);
    const auto a = reg.lookup(13, 18, 0), b = reg.lookup(13, 18, 0);
    for (int i = 0; i < 100; ++i) {
        const Individual x = new_random_individual(18, rng);
        REQUIRE(a.base_fitness(x) == b.base_fitness(x));
    }
}
