#include "evoport/ecga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evoport::ecga {

double group_complexity(std::size_t groupBits, std::span<const std::size_t> counts, std::size_t N) {
    const double n = static_cast<double>(N);
    const double model = std::log2(n + 1.0) * (std::ldexp(1.0, static_cast<int>(groupBits)) - 1.0);
    double entropy = 0.0;
    for (std::size_t c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / n;
            entropy -= p * std::log2(p);
        }
    }
    return model + n * entropy;
}

double combined_complexity(const MpmModel& model) {
    if (model.N == 0) {
        throw Error("combined_complexity: N must be positive");
    }
    if (model.groups.size() != model.counts.size()) {
        throw Error("combined_complexity: one frequency table per group required");
    }
    double total = 0.0;
    for (std::size_t g = 0; g < model.groups.size(); ++g) {
        const auto& table = model.counts[g];
        if (model.groups[g].empty() || table.size() != (std::size_t{1} << model.groups[g].size())) {
            throw Error("combined_complexity: table size does not match group size");
        }
        std::size_t sum = 0;
        for (auto c : table) {
            sum += c;
        }
        if (sum != model.N) {
            throw Error("combined_complexity: frequency table does not sum to N");
        }
        total += group_complexity(model.groups[g].size(), table, model.N);
    }
    return total;
}

MpmModel tabulate(std::span<const Individual> selected, std::vector<std::vector<std::size_t>> groups) {
    MpmModel model;
    model.N = selected.size();
    model.counts.reserve(groups.size());
    for (const auto& g : groups) {
        if (g.empty() || g.size() > 24) {
            throw Error("tabulate: group size must be between 1 and 24");
        }
        std::vector<std::size_t> table(std::size_t{1} << g.size(), 0);
        for (const auto& ind : selected) {
            std::size_t code = 0;
            for (std::size_t k = 0; k < g.size(); ++k) {
                code |= static_cast<std::size_t>(ind.allele(g[k])) << k;
            }
            ++table[code];
        }
        model.counts.push_back(std::move(table));
    }
    model.groups = std::move(groups);
    return model;
}

namespace {

double score_one(const GroupCodes& a, const GroupCodes& b, std::size_t N,
                 std::vector<std::size_t>& table) {
    const std::size_t bits = a.bits + b.bits;
    table.assign(std::size_t{1} << bits, 0);
    const auto shift = static_cast<unsigned>(a.bits);
    for (std::size_t r = 0; r < N; ++r) {
        ++table[a.codes[r] | (b.codes[r] << shift)];
    }
    return group_complexity(bits, table, N);
}

}  // namespace

void score_merges_serial(std::span<const GroupCodes> groups, std::span<const MergeJob> jobs,
                         std::size_t N, std::span<double> out) {
    std::vector<std::size_t> table;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        out[j] = score_one(groups[jobs[j].a], groups[jobs[j].b], N, table);
    }
}

void score_merges_parallel(std::span<const GroupCodes> groups, std::span<const MergeJob> jobs,
                           std::size_t N, std::span<double> out) {
    const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel
    {
        std::vector<std::size_t> table;
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t j = 0; j < count; ++j) {
            const auto& job = jobs[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(j)] = score_one(groups[job.a], groups[job.b], N, table);
        }
    }
}

void score_merges(std::span<const GroupCodes> groups, std::span<const MergeJob> jobs, std::size_t N,
                  std::span<double> out, Exec exec) {
    if (out.size() < jobs.size()) {
        throw Error("score_merges: output span too small");
    }
    if (exec == Exec::Parallel && jobs.size() > 1 && jobs.size() * N >= kParallelGrain &&
        kernel_threads() > 1) {
        score_merges_parallel(groups, jobs, N, out);
    } else {
        score_merges_serial(groups, jobs, N, out);
    }
}

MpmModel greedy_mpm_search(std::span<const Individual> selected, const SearchOptions& options,
                           std::uint64_t* metricEvals) {
    if (selected.empty()) {
        throw Error("greedy_mpm_search: empty selection");
    }
    const std::size_t N = selected.size();
    const std::size_t n = selected.front().size();
    const std::size_t cap = std::clamp<std::size_t>(options.maxGroupSize, 1, 24);
    constexpr double kNoMerge = std::numeric_limits<double>::quiet_NaN();

    const BitColumns columns(selected);
    std::vector<std::vector<std::size_t>> members(n);
    std::vector<GroupCodes> codes(n);
    std::vector<double> cost(n);
    for (std::size_t i = 0; i < n; ++i) {
        members[i] = {i};
        codes[i].bits = 1;
        const auto col = columns.column(i);
        codes[i].codes.assign(col.begin(), col.end());
        const std::size_t ones = unitation(col);
        const std::size_t table[2] = {N - ones, ones};
        cost[i] = group_complexity(1, table, N);
    }

    // merged[a][b] (a < b): complexity of the union of groups a and b.
    std::vector<std::vector<double>> merged(n, std::vector<double>(n, kNoMerge));
    std::vector<MergeJob> jobs;
    std::vector<double> scores;
    auto run_jobs = [&] {
        scores.resize(jobs.size());
        score_merges(codes, jobs, N, scores, options.exec);
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            merged[jobs[j].a][jobs[j].b] = scores[j];
        }
        if (metricEvals) {
            *metricEvals += jobs.size();
        }
    };

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (2 <= cap) {
                jobs.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
            }
        }
    }
    run_jobs();

    for (;;) {
        const std::size_t groups = members.size();
        double best_delta = -kMergeTolerance;
        std::size_t best_a = groups;
        std::size_t best_b = groups;
        for (std::size_t a = 0; a < groups; ++a) {
            for (std::size_t b = a + 1; b < groups; ++b) {
                const double m = merged[a][b];
                if (std::isnan(m)) {
                    continue;
                }
                const double delta = m - cost[a] - cost[b];
                if (delta < best_delta) {
                    best_delta = delta;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (best_a == groups) {
            break;
        }

        const unsigned shift = static_cast<unsigned>(codes[best_a].bits);
        for (std::size_t r = 0; r < N; ++r) {
            codes[best_a].codes[r] |= codes[best_b].codes[r] << shift;
        }
        codes[best_a].bits += codes[best_b].bits;
        members[best_a].insert(members[best_a].end(), members[best_b].begin(), members[best_b].end());
        cost[best_a] = merged[best_a][best_b];

        members.erase(members.begin() + static_cast<std::ptrdiff_t>(best_b));
        codes.erase(codes.begin() + static_cast<std::ptrdiff_t>(best_b));
        cost.erase(cost.begin() + static_cast<std::ptrdiff_t>(best_b));
        merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(best_b));
        for (auto& row : merged) {
            row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_b));
        }

        jobs.clear();
        const std::size_t a = best_a;
        for (std::size_t other = 0; other < members.size(); ++other) {
            if (other == a) {
                continue;
            }
            const std::size_t lo = std::min(a, other);
            const std::size_t hi = std::max(a, other);
            if (codes[lo].bits + codes[hi].bits <= cap) {
                jobs.push_back({static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi)});
            } else {
                merged[lo][hi] = kNoMerge;
            }
        }
        run_jobs();
    }

    return tabulate(selected, std::move(members));
}

Population sample_mpm(const MpmModel& model, std::size_t count, RngStream& rng) {
    if (model.N == 0) {
        throw Error("sample_mpm: empty model");
    }
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> cumulative(model.groups.size());
    for (std::size_t g = 0; g < model.groups.size(); ++g) {
        n += model.groups[g].size();
        auto& cum = cumulative[g];
        cum.resize(model.counts[g].size());
        std::size_t running = 0;
        for (std::size_t c = 0; c < cum.size(); ++c) {
            running += model.counts[g][c];
            cum[c] = running;
        }
    }
    Population out;
    out.reserve(count);
    std::vector<std::uint8_t> bits(n);
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t g = 0; g < model.groups.size(); ++g) {
            const std::size_t r = rng.below(model.N);
            const auto& cum = cumulative[g];
            const auto config =
                static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), r) - cum.begin());
            const auto& group = model.groups[g];
            for (std::size_t b = 0; b < group.size(); ++b) {
                bits.at(group[b]) = static_cast<std::uint8_t>((config >> b) & 1U);
            }
        }
        out.emplace_back(bits);
    }
    return out;
}

EcgaAlgorithm::EcgaAlgorithm(Params params) : params_(params) {
    if (params_.tournamentSize < 2) {
        throw Error("ECGA: tournament size must be at least 2");
    }
    if (params_.maxGroupSize < 1 || params_.maxGroupSize > 24) {
        throw Error("ECGA: maximum group size must be between 1 and 24");
    }
}

void EcgaAlgorithm::run_generation(Population& pop, GenerationContext& ctx) const {
    const std::size_t elite = std::min(params_.eliteCount, pop.size() - 1);
    const auto selected = select_tournament(pop, params_.tournamentSize, pop.size(), ctx.rng());
    const auto model = greedy_mpm_search(selected, {params_.maxGroupSize, params_.exec},
                                         &ctx.work().metricEvals);
    auto offspring = sample_mpm(model, pop.size() - elite, ctx.rng());
    ctx.work().samples += offspring.size();
    ctx.evaluate_all(offspring);
    elitist_replace(pop, std::move(offspring), elite);
}

}  // namespace evoport::ecga
