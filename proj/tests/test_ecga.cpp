#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "evoport/ecga.hpp"
#include "oracles.hpp"

using namespace evoport;
using namespace evoport::ecga;

namespace {

Population pop_of(std::initializer_list<const char*> rows) {
    Population pop;
    for (const char* r : rows) pop.push_back(Individual::from_string(r));
    return pop;
}

std::vector<std::vector<std::size_t>> singletons(std::size_t n) {
    std::vector<std::vector<std::size_t>> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back({i});
    return g;
}

std::vector<std::vector<std::size_t>> random_partition(std::size_t n, RngStream& rng) {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t g = rng.below(groups.size() + 1);
        if (g == groups.size()) groups.push_back({});
        groups[g].push_back(i);
    }
    return groups;
}

void require_valid_partition(const MpmModel& model, std::size_t n) {
    std::vector<int> seen(n, 0);
    for (const auto& g : model.groups) {
        REQUIRE_FALSE(g.empty());
        for (auto i : g) ++seen.at(i);
    }
    for (int s : seen) REQUIRE(s == 1);
}

void require_merge_local_optimum(std::span<const Individual> pop, const MpmModel& model) {
    const double base = combined_complexity(model);
    for (std::size_t a = 0; a < model.groups.size(); ++a) {
        for (std::size_t b = a + 1; b < model.groups.size(); ++b) {
            auto groups = model.groups;
            groups[a].insert(groups[a].end(), groups[b].begin(), groups[b].end());
            groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(b));
            if (groups[a].size() > 12) continue;
            REQUIRE(combined_complexity(tabulate(pop, groups)) >= base - kMergeTolerance);
        }
    }
}

}  // namespace

TEST_CASE("combined complexity examples") {
    const double l5 = std::log2(5.0);
    const Population half = pop_of({"0", "0", "1", "1"});
    CHECK(combined_complexity(tabulate(half, {{0}})) == doctest::Approx(4.0 + l5));

    const Population same = pop_of({"101", "101", "101", "101"});
    CHECK(combined_complexity(tabulate(same, {{0, 1}, {2}})) == doctest::Approx(l5 * (3 + 1)));

    const Population indep = pop_of({"00", "01", "10", "11"});
    const double split = combined_complexity(tabulate(indep, {{0}, {1}}));
    const double merged = combined_complexity(tabulate(indep, {{0, 1}}));
    CHECK(split == doctest::Approx(2 * l5 + 8));
    CHECK(merged == doctest::Approx(3 * l5 + 8));
    CHECK(greedy_mpm_search(indep).groups.size() == 2);
}

TEST_CASE("combined complexity matches the brute-force oracle") {
    RngStream rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t N = 1 + rng.below(16), ell = 1 + rng.below(8);
        const Population pop = new_random_population(N, ell, rng);
        const auto groups = random_partition(ell, rng);
        REQUIRE(std::abs(combined_complexity(tabulate(pop, groups)) - oracle::combined_complexity(pop, groups)) <
                1e-9);
    }
}

TEST_CASE("all-singleton complexity is the per-bit sum") {
    RngStream rng(2);
    const std::size_t N = 50, ell = 10;
    const Population pop = new_random_population(N, ell, rng);
    double expected = 0.0;
    for (std::size_t j = 0; j < ell; ++j) {
        double ones = 0;
        for (const auto& ind : pop) ones += ind.allele(j);
        const double p = ones / N;
        double h = 0.0;
        if (p > 0) h -= p * std::log2(p);
        if (p < 1) h -= (1 - p) * std::log2(1 - p);
        expected += std::log2(N + 1.0) + N * h;
    }
    CHECK(combined_complexity(tabulate(pop, singletons(ell))) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("malformed models are rejected") {
    MpmModel bad{4, {{0}}, {{1, 1}}};
    CHECK_THROWS_AS(combined_complexity(bad), Error);
    MpmModel wrong_size{4, {{0}}, {{1, 1, 2}}};
    CHECK_THROWS_AS(combined_complexity(wrong_size), Error);
}

TEST_CASE("greedy search merges correlated bits") {
    RngStream rng(3);
    Population pop = new_random_population(32, 4, rng);
    for (auto& ind : pop) ind.set_allele(1, ind.allele(0));
    const auto model = greedy_mpm_search(pop);
    require_valid_partition(model, 4);
    const bool merged = std::any_of(model.groups.begin(), model.groups.end(), [](const auto& g) {
        return std::find(g.begin(), g.end(), 0u) != g.end() && std::find(g.begin(), g.end(), 1u) != g.end();
    });
    CHECK(merged);
}

TEST_CASE("greedy search result is a local optimum and bounded by the global one") {
    RngStream rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t N = 4 + rng.below(17), ell = 2 + rng.below(5);
        Population pop = new_random_population(N, ell, rng);
        if (trial % 2) {
            for (auto& ind : pop) ind.set_allele(ell - 1, ind.allele(0) ^ (rng.below(8) == 0));
        }
        std::uint64_t evals = 0;
        const auto model = greedy_mpm_search(pop, {}, &evals);
        CHECK(evals > 0);
        require_valid_partition(model, ell);
        require_merge_local_optimum(pop, model);

        std::vector<std::vector<std::vector<std::size_t>>> all;
        oracle::partitions(ell, all);
        double best = 1e300;
        for (const auto& p : all) best = std::min(best, oracle::combined_complexity(pop, p));
        REQUIRE(combined_complexity(model) >= best - 1e-9);
    }
}

TEST_CASE("independent bits stay mostly separate") {
    RngStream rng(5);
    const Population pop = new_random_population(32, 10, rng);
    const auto model = greedy_mpm_search(pop);
    require_merge_local_optimum(pop, model);
}

TEST_CASE("group size cap") {
    RngStream rng(6);
    Population pop = new_random_population(200, 6, rng);
    for (auto& ind : pop)
        for (std::size_t j = 1; j < 6; ++j) ind.set_allele(j, ind.allele(0));
    const auto capped = greedy_mpm_search(pop, {2, Exec::Serial});
    for (const auto& g : capped.groups) CHECK(g.size() <= 2);
    // Six copies of one bit: the 2^6 table costs more than it saves, so the
    // uncapped search stops at two groups of three.
    const auto uncapped = greedy_mpm_search(pop, {12, Exec::Serial});
    CHECK(uncapped.groups.size() == 2);
    CHECK(capped.groups.size() == 3);
}

TEST_CASE("sampling") {
    RngStream rng(7);
    MpmModel one{5, {{0, 1, 2}}, {{0, 0, 0, 0, 0, 5, 0, 0}}};
    for (const auto& ind : sample_mpm(one, 20, rng)) REQUIRE(ind.to_string() == "101");

    MpmModel two{5, {{0}, {1}}, {{0, 5}, {5, 0}}};
    for (const auto& ind : sample_mpm(two, 20, rng)) REQUIRE(ind.to_string() == "10");

    MpmModel table{10, {{0, 1}}, {{1, 2, 3, 4}}};
    std::map<std::string, double> freq;
    const std::size_t n = 10000;
    for (const auto& ind : sample_mpm(table, n, rng)) freq[ind.to_string()] += 1.0 / n;
    CHECK(std::abs(freq["00"] - 0.1) < 0.03);
    CHECK(std::abs(freq["10"] - 0.2) < 0.03);
    CHECK(std::abs(freq["01"] - 0.3) < 0.03);
    CHECK(std::abs(freq["11"] - 0.4) < 0.03);
}

TEST_CASE("parallel merge scoring equals the serial reference") {
    RngStream rng(8);
    const std::size_t N = 3000, ell = 60;
    const Population pop = new_random_population(N, ell, rng);
    std::vector<GroupCodes> groups;
    for (std::size_t j = 0; j < ell; j += 2) {
        GroupCodes g;
        g.bits = 2;
        for (const auto& ind : pop) g.codes.push_back(static_cast<std::uint32_t>(ind.allele(j) | (ind.allele(j + 1) << 1)));
        groups.push_back(std::move(g));
    }
    std::vector<MergeJob> jobs;
    for (std::uint32_t a = 0; a < groups.size(); ++a)
        for (std::uint32_t b = a + 1; b < groups.size(); ++b) jobs.push_back({a, b});
    std::vector<double> serial(jobs.size()), parallel(jobs.size());
    score_merges_serial(groups, jobs, N, serial);
    score_merges_parallel(groups, jobs, N, parallel);
    CHECK(serial == parallel);

    const auto ms = greedy_mpm_search(pop, {12, Exec::Serial});
    const auto mp = greedy_mpm_search(pop, {12, Exec::Parallel});
    CHECK(ms.groups == mp.groups);
    CHECK(ms.counts == mp.counts);
}
