// Serial vs OpenMP model-building kernels on random selected populations.

#include <benchmark/benchmark.h>

#include <numeric>

#include "evoport/ecga.hpp"
#include "evoport/hboa.hpp"

using namespace evoport;

namespace {

Population random_pop(std::size_t n, std::size_t ell) {
    RngStream rng(42);
    return new_random_population(n, ell, rng);
}

struct MergeFixture {
    std::vector<ecga::GroupCodes> groups;
    std::vector<ecga::MergeJob> jobs;
    std::size_t N;

    MergeFixture(std::size_t n, std::size_t ell) : N(n) {
        const Population pop = random_pop(n, ell);
        for (std::size_t j = 0; j < ell; ++j) {
            ecga::GroupCodes g;
            g.bits = 1;
            for (const auto& ind : pop) g.codes.push_back(static_cast<std::uint32_t>(ind.allele(j)));
            groups.push_back(std::move(g));
        }
        for (std::uint32_t a = 0; a < ell; ++a)
            for (std::uint32_t b = a + 1; b < ell; ++b) jobs.push_back({a, b});
    }
};

struct SplitFixture {
    BitColumns data;
    std::vector<std::uint32_t> members;
    std::vector<hboa::SplitJob> jobs;
    std::size_t N;

    SplitFixture(std::size_t n, std::size_t ell) : data(random_pop(n, ell)), members(n), N(n) {
        std::iota(members.begin(), members.end(), 0u);
        for (std::uint32_t t = 0; t < ell; ++t)
            for (std::uint32_t b = 0; b < ell; ++b)
                if (b != t) jobs.push_back({t, b, &members});
    }
};

template <Exec E>
void BM_EcgaMerges(benchmark::State& state) {
    MergeFixture f(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    std::vector<double> out(f.jobs.size());
    for (auto _ : state) {
        if constexpr (E == Exec::Serial) {
            ecga::score_merges_serial(f.groups, f.jobs, f.N, out);
        } else {
            ecga::score_merges_parallel(f.groups, f.jobs, f.N, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.jobs.size()));
}

template <Exec E>
void BM_HboaSplits(benchmark::State& state) {
    SplitFixture f(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    std::vector<double> out(f.jobs.size());
    for (auto _ : state) {
        if constexpr (E == Exec::Serial) {
            hboa::score_splits_serial(f.data, f.jobs, f.N, out);
        } else {
            hboa::score_splits_parallel(f.data, f.jobs, f.N, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.jobs.size()));
}

}  // namespace

BENCHMARK(BM_EcgaMerges<Exec::Serial>)->Args({1024, 60})->Args({8192, 120});
BENCHMARK(BM_EcgaMerges<Exec::Parallel>)->Args({1024, 60})->Args({8192, 120});
BENCHMARK(BM_HboaSplits<Exec::Serial>)->Args({1024, 60})->Args({8192, 120});
BENCHMARK(BM_HboaSplits<Exec::Parallel>)->Args({1024, 60})->Args({8192, 120});

BENCHMARK_MAIN();
