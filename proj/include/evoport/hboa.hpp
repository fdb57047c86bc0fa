#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evoport/engine.hpp"
#include "evoport/kernels.hpp"

namespace evoport::hboa {

/// log2 of the Bayesian-Dirichlet (K2) score of a binary leaf with uniform
/// priors: log2[ n0! n1! / (n0 + n1 + 1)! ], computed with log-gamma.
double leaf_score(std::uint64_t n0, std::uint64_t n1);

/// Penalty charged per added leaf: 0.5 * log2(N).
double split_penalty(std::size_t N);

struct LeafCounts {
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;
};

/// Score of the two children minus the parent score minus the penalty.
double split_gain(LeafCounts parent, LeafCounts child0, LeafCounts child1, std::size_t N);

struct TreeNode {
    int splitBit = -1;  // -1 for leaves
    int child[2] = {-1, -1};
    int parent = -1;
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;

    bool is_leaf() const noexcept { return splitBit < 0; }
};

/// Decision tree for one variable; node 0 is the root.
struct DecisionTree {
    std::vector<TreeNode> nodes{TreeNode{}};

    /// Distinct bits tested anywhere in the tree, ascending.
    std::vector<std::size_t> tested_bits() const;
    /// Leaf reached by an assignment of the tested bits.
    const TreeNode& leaf_for(std::span<const std::uint8_t> assignment) const;
};

/// Bayesian network with one decision tree per variable.
struct DecisionTreeModel {
    std::size_t N = 0;
    std::vector<DecisionTree> trees;

    std::vector<std::size_t> parents(std::size_t variable) const;
    /// Parents-before-children order, lowest index first among ready variables.
    /// Throws when the dependency graph has a cycle.
    std::vector<std::size_t> topological_order() const;
};

struct SplitJob {
    std::uint32_t target = 0;
    std::uint32_t bit = 0;
    const std::vector<std::uint32_t>* members = nullptr;
};

/// split_gain for each job, counting over the leaf's member rows.
void score_splits_serial(const BitColumns& data, std::span<const SplitJob> jobs, std::size_t N,
                         std::span<double> out);
void score_splits_parallel(const BitColumns& data, std::span<const SplitJob> jobs, std::size_t N,
                           std::span<double> out);
void score_splits(const BitColumns& data, std::span<const SplitJob> jobs, std::size_t N,
                  std::span<double> out, Exec exec);

/// Greedy construction of the decision-tree network. Keeps the member rows of
/// every leaf and a cache of split gains so that each step only scores the
/// two leaves it creates.
class NetworkBuilder {
public:
    struct Split {
        std::size_t target = 0;
        std::size_t node = 0;
        std::size_t bit = 0;
        double gain = 0.0;
    };

    explicit NetworkBuilder(std::span<const Individual> selected, Exec exec = Exec::Parallel);

    std::size_t variables() const noexcept { return model_.trees.size(); }
    const DecisionTreeModel& model() const noexcept { return model_; }
    std::uint64_t metric_evals() const noexcept { return metricEvals_; }

    /// Whether adding the edge bit -> target closes a cycle.
    bool creates_cycle(std::size_t target, std::size_t bit) const;
    bool tested_on_path(std::size_t target, std::size_t node, std::size_t bit) const;

    /// Gain of splitting a leaf of tree `target` on `bit`. Throws when the
    /// node is not a leaf, the bit is already tested on its path, or the
    /// split would make the network cyclic.
    double split_gain(std::size_t target, std::size_t node, std::size_t bit) const;

    /// Valid split with the largest positive gain; ties go to the lowest
    /// tree, then the lowest leaf id, then the lowest bit.
    std::optional<Split> best_split() const;
    void apply(const Split& split);

    /// Applies best splits until none has positive gain.
    DecisionTreeModel build();

private:
    void score_leaves(std::span<const std::pair<std::size_t, std::size_t>> leaves);

    BitColumns data_;
    std::size_t N_;
    Exec exec_;
    DecisionTreeModel model_;
    std::vector<std::vector<std::vector<std::uint32_t>>> members_;  // [tree][node]
    std::vector<std::vector<std::vector<double>>> gains_;            // [tree][node][bit]
    std::vector<std::uint8_t> reach_;                                 // reach_[u * n + v]: u is an ancestor of v
    std::uint64_t metricEvals_ = 0;
};

DecisionTreeModel build_network(std::span<const Individual> selected, Exec exec = Exec::Parallel,
                                std::uint64_t* metricEvals = nullptr);

/// Ancestral sampling; each bit is 1 with the Laplace-corrected leaf
/// probability (n1 + 1) / (n0 + n1 + 2).
Population sample_network(const DecisionTreeModel& model, std::size_t count, RngStream& rng);

struct RtrParams {
    std::size_t windowSize = 1;
};

/// Window size rule min(stringSize, N / 20), at least 1.
std::size_t default_window(std::size_t stringSize, std::size_t populationSize);

/// Restricted tournament replacement: each offspring competes with the
/// Hamming-nearest of windowSize distinct random members (lowest index on
/// ties) and replaces it when its fitness is at least as high.
void rtr_replace(Population& pop, std::span<const Individual> offspring, RtrParams params,
                 RngStream& rng);

struct Params {
    std::size_t tournamentSize = 2;
    double offspringFraction = 0.5;
    std::size_t rtrWindow = 0;  // 0 = default_window
    Exec exec = Exec::Parallel;
};

class HboaAlgorithm final : public Algorithm {
public:
    explicit HboaAlgorithm(Params params = {});

    EngineKind kind() const noexcept override { return EngineKind::Hboa; }
    void run_generation(Population& pop, GenerationContext& ctx) const override;

private:
    Params params_;
};

}  // namespace evoport::hboa
