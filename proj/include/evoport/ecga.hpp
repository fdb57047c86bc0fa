#pragma once

#include <cstdint>
#include <vector>

#include "evoport/engine.hpp"
#include "evoport/kernels.hpp"

namespace evoport::ecga {

/// Marginal product model: a partition of the bit positions into groups and,
/// per group, the frequency of every configuration in the selected set.
/// Configuration index c of group g has bit k set when allele groups[g][k] is 1.
struct MpmModel {
    std::size_t N = 0;
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::vector<std::size_t>> counts;
};

/// Model complexity plus compressed population complexity of one group:
/// log2(N+1) * (2^bits - 1) + N * H(counts / N).
double group_complexity(std::size_t groupBits, std::span<const std::size_t> counts, std::size_t N);

/// Sum of group_complexity over the model. Throws on tables that are the
/// wrong size or do not sum to N.
double combined_complexity(const MpmModel& model);

/// Frequency tables of the given groups over the selected set.
MpmModel tabulate(std::span<const Individual> selected, std::vector<std::vector<std::size_t>> groups);

/// Per-individual configuration codes of one group.
struct GroupCodes {
    std::size_t bits = 0;
    std::vector<std::uint32_t> codes;
};

struct MergeJob {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
};

/// group_complexity of the union of groups a and b for every job.
void score_merges_serial(std::span<const GroupCodes> groups, std::span<const MergeJob> jobs,
                         std::size_t N, std::span<double> out);
void score_merges_parallel(std::span<const GroupCodes> groups, std::span<const MergeJob> jobs,
                           std::size_t N, std::span<double> out);
void score_merges(std::span<const GroupCodes> groups, std::span<const MergeJob> jobs, std::size_t N,
                  std::span<double> out, Exec exec);

struct SearchOptions {
    std::size_t maxGroupSize = 12;
    Exec exec = Exec::Parallel;
};

/// Greedy MDL search: from all singletons, repeatedly apply the pairwise
/// merge with the largest strict decrease in combined complexity until none
/// decreases it. Ties go to the lexicographically smallest group pair.
/// metricEvals, when given, is incremented once per merge score computed.
MpmModel greedy_mpm_search(std::span<const Individual> selected, const SearchOptions& options = {},
                           std::uint64_t* metricEvals = nullptr);

/// Draws each group's configuration independently from its empirical distribution.
Population sample_mpm(const MpmModel& model, std::size_t count, RngStream& rng);

/// Improvements smaller than this are treated as ties.
inline constexpr double kMergeTolerance = 1e-9;

struct Params {
    std::size_t tournamentSize = 8;
    std::size_t maxGroupSize = 12;
    std::size_t eliteCount = 1;
    Exec exec = Exec::Parallel;
};

class EcgaAlgorithm final : public Algorithm {
public:
    explicit EcgaAlgorithm(Params params = {});

    EngineKind kind() const noexcept override { return EngineKind::Ecga; }
    void run_generation(Population& pop, GenerationContext& ctx) const override;

private:
    Params params_;
};

}  // namespace evoport::ecga
