#include "evoport/hboa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace evoport::hboa {

double leaf_score(std::uint64_t n0, std::uint64_t n1) {
    const double a = static_cast<double>(n0);
    const double b = static_cast<double>(n1);
    return (std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0)) / std::numbers::ln2;
}

double split_penalty(std::size_t N) { return 0.5 * std::log2(static_cast<double>(N)); }

double split_gain(LeafCounts parent, LeafCounts child0, LeafCounts child1, std::size_t N) {
    if (child0.n0 + child1.n0 != parent.n0 || child0.n1 + child1.n1 != parent.n1) {
        throw Error("split_gain: child counts do not add up to the parent counts");
    }
    return leaf_score(child0.n0, child0.n1) + leaf_score(child1.n0, child1.n1) -
           leaf_score(parent.n0, parent.n1) - split_penalty(N);
}

std::vector<std::size_t> DecisionTree::tested_bits() const {
    std::vector<std::size_t> bits;
    for (const auto& node : nodes) {
        if (!node.is_leaf()) {
            bits.push_back(static_cast<std::size_t>(node.splitBit));
        }
    }
    std::sort(bits.begin(), bits.end());
    bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
    return bits;
}

const TreeNode& DecisionTree::leaf_for(std::span<const std::uint8_t> assignment) const {
    const TreeNode* node = &nodes.front();
    while (!node->is_leaf()) {
        node = &nodes[static_cast<std::size_t>(node->child[assignment[static_cast<std::size_t>(node->splitBit)]])];
    }
    return *node;
}

std::vector<std::size_t> DecisionTreeModel::parents(std::size_t variable) const {
    return trees.at(variable).tested_bits();
}

std::vector<std::size_t> DecisionTreeModel::topological_order() const {
    const std::size_t n = trees.size();
    std::vector<std::vector<std::size_t>> children(n);
    std::vector<std::size_t> missing(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t p : parents(v)) {
            if (p >= n) {
                throw Error("topological_order: parent index out of range");
            }
            children[p].push_back(v);
            ++missing[v];
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<bool> done(n, false);
    // Repeated scans keep the lowest-index-first rule without a heap; n is small.
    while (order.size() < n) {
        bool progressed = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (!done[v] && missing[v] == 0) {
                done[v] = true;
                order.push_back(v);
                for (std::size_t c : children[v]) {
                    --missing[c];
                }
                progressed = true;
                break;
            }
        }
        if (!progressed) {
            throw Error("topological_order: the network has a cycle");
        }
    }
    return order;
}

namespace {

double score_job(const BitColumns& data, const SplitJob& job, std::size_t N) {
    const auto target = data.column(job.target);
    const auto split = data.column(job.bit);
    std::uint64_t counts[2][2] = {{0, 0}, {0, 0}};
    for (std::uint32_t r : *job.members) {
        ++counts[split[r]][target[r]];
    }
    const LeafCounts c0{counts[0][0], counts[0][1]};
    const LeafCounts c1{counts[1][0], counts[1][1]};
    const LeafCounts parent{c0.n0 + c1.n0, c0.n1 + c1.n1};
    return split_gain(parent, c0, c1, N);
}

}  // namespace

void score_splits_serial(const BitColumns& data, std::span<const SplitJob> jobs, std::size_t N,
                         std::span<double> out) {
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        out[j] = score_job(data, jobs[j], N);
    }
}

void score_splits_parallel(const BitColumns& data, std::span<const SplitJob> jobs, std::size_t N,
                           std::span<double> out) {
    const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t j = 0; j < count; ++j) {
        out[static_cast<std::size_t>(j)] = score_job(data, jobs[static_cast<std::size_t>(j)], N);
    }
}

void score_splits(const BitColumns& data, std::span<const SplitJob> jobs, std::size_t N,
                  std::span<double> out, Exec exec) {
    if (out.size() < jobs.size()) {
        throw Error("score_splits: output span too small");
    }
    std::size_t work = 0;
    for (const auto& job : jobs) {
        work += job.members->size();
    }
    if (exec == Exec::Parallel && jobs.size() > 1 && work >= kParallelGrain && kernel_threads() > 1) {
        score_splits_parallel(data, jobs, N, out);
    } else {
        score_splits_serial(data, jobs, N, out);
    }
}

NetworkBuilder::NetworkBuilder(std::span<const Individual> selected, Exec exec)
    : data_(selected), N_(selected.size()), exec_(exec) {
    if (selected.empty()) {
        throw Error("build_network: empty selection");
    }
    const std::size_t n = data_.cols();
    model_.N = N_;
    model_.trees.resize(n);
    members_.resize(n);
    gains_.resize(n);
    reach_.assign(n * n, 0);

    std::vector<std::uint32_t> all(N_);
    std::iota(all.begin(), all.end(), std::uint32_t{0});
    std::vector<std::pair<std::size_t, std::size_t>> roots;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t ones = unitation(data_.column(t));
        auto& root = model_.trees[t].nodes.front();
        root.n0 = N_ - ones;
        root.n1 = ones;
        members_[t].push_back(all);
        gains_[t].emplace_back(n, std::numeric_limits<double>::quiet_NaN());
        roots.emplace_back(t, 0);
    }
    score_leaves(roots);
}

bool NetworkBuilder::creates_cycle(std::size_t target, std::size_t bit) const {
    const std::size_t n = variables();
    return bit == target || reach_[target * n + bit] != 0;
}

bool NetworkBuilder::tested_on_path(std::size_t target, std::size_t node, std::size_t bit) const {
    const auto& nodes = model_.trees.at(target).nodes;
    for (int cur = nodes.at(node).parent; cur >= 0; cur = nodes[static_cast<std::size_t>(cur)].parent) {
        if (static_cast<std::size_t>(nodes[static_cast<std::size_t>(cur)].splitBit) == bit) {
            return true;
        }
    }
    return false;
}

double NetworkBuilder::split_gain(std::size_t target, std::size_t node, std::size_t bit) const {
    if (target >= variables() || bit >= variables()) {
        throw Error("split_gain: variable index out of range");
    }
    if (!model_.trees[target].nodes.at(node).is_leaf()) {
        throw Error("split_gain: node is not a leaf");
    }
    if (tested_on_path(target, node, bit)) {
        throw Error("split_gain: bit already tested on the path to this leaf");
    }
    if (creates_cycle(target, bit)) {
        throw Error("split_gain: candidate split would make the network cyclic");
    }
    const SplitJob job{static_cast<std::uint32_t>(target), static_cast<std::uint32_t>(bit),
                       &members_[target][node]};
    return score_job(data_, job, N_);
}

void NetworkBuilder::score_leaves(std::span<const std::pair<std::size_t, std::size_t>> leaves) {
    const std::size_t n = variables();
    std::vector<SplitJob> jobs;
    std::vector<std::size_t> nodeOf;
    for (const auto& [t, node] : leaves) {
        for (std::size_t bit = 0; bit < n; ++bit) {
            if (bit != t && !tested_on_path(t, node, bit)) {
                jobs.push_back({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(bit),
                                &members_[t][node]});
                nodeOf.push_back(node);
            }
        }
    }
    std::vector<double> scores(jobs.size());
    score_splits(data_, jobs, N_, scores, exec_);
    metricEvals_ += jobs.size();
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        gains_[jobs[j].target][nodeOf[j]][jobs[j].bit] = scores[j];
    }
}

std::optional<NetworkBuilder::Split> NetworkBuilder::best_split() const {
    std::optional<Split> best;
    for (std::size_t t = 0; t < variables(); ++t) {
        const auto& nodes = model_.trees[t].nodes;
        for (std::size_t node = 0; node < nodes.size(); ++node) {
            if (!nodes[node].is_leaf()) {
                continue;
            }
            const auto& gains = gains_[t][node];
            for (std::size_t bit = 0; bit < gains.size(); ++bit) {
                const double g = gains[bit];
                if (!(g > 0.0) || (best && !(g > best->gain))) {
                    continue;
                }
                if (creates_cycle(t, bit)) {
                    continue;
                }
                best = Split{t, node, bit, g};
            }
        }
    }
    return best;
}

void NetworkBuilder::apply(const Split& split) {
    const std::size_t n = variables();
    const std::size_t t = split.target;
    auto& nodes = model_.trees.at(t).nodes;
    if (!nodes.at(split.node).is_leaf() || tested_on_path(t, split.node, split.bit) ||
        creates_cycle(t, split.bit)) {
        throw Error("NetworkBuilder::apply: invalid split");
    }

    const auto target = data_.column(t);
    const auto test = data_.column(split.bit);
    std::vector<std::uint32_t> part[2];
    TreeNode child[2];
    for (std::uint32_t r : members_[t][split.node]) {
        const int side = test[r];
        part[side].push_back(r);
        (target[r] ? child[side].n1 : child[side].n0) += 1;
    }
    const int first = static_cast<int>(nodes.size());
    for (int side = 0; side < 2; ++side) {
        child[side].parent = static_cast<int>(split.node);
        nodes.push_back(child[side]);
        members_[t].push_back(std::move(part[side]));
        gains_[t].emplace_back(n, std::numeric_limits<double>::quiet_NaN());
    }
    auto& parent = nodes[split.node];
    parent.splitBit = static_cast<int>(split.bit);
    parent.child[0] = first;
    parent.child[1] = first + 1;
    members_[t][split.node] = {};
    gains_[t][split.node] = {};

    if (!reach_[split.bit * n + t]) {
        std::vector<std::size_t> ancestors{split.bit};
        std::vector<std::size_t> descendants{t};
        for (std::size_t u = 0; u < n; ++u) {
            if (reach_[u * n + split.bit]) ancestors.push_back(u);
            if (reach_[t * n + u]) descendants.push_back(u);
        }
        for (std::size_t u : ancestors) {
            for (std::size_t v : descendants) {
                reach_[u * n + v] = 1;
            }
        }
    }

    const std::pair<std::size_t, std::size_t> fresh[2] = {{t, static_cast<std::size_t>(first)},
                                                          {t, static_cast<std::size_t>(first + 1)}};
    score_leaves(fresh);
}

DecisionTreeModel NetworkBuilder::build() {
    while (auto split = best_split()) {
        apply(*split);
    }
    return model_;
}

DecisionTreeModel build_network(std::span<const Individual> selected, Exec exec,
                                std::uint64_t* metricEvals) {
    NetworkBuilder builder(selected, exec);
    auto model = builder.build();
    if (metricEvals) {
        *metricEvals += builder.metric_evals();
    }
    return model;
}

Population sample_network(const DecisionTreeModel& model, std::size_t count, RngStream& rng) {
    const auto order = model.topological_order();
    Population out;
    out.reserve(count);
    std::vector<std::uint8_t> bits(model.trees.size(), 0);
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t v : order) {
            const auto& leaf = model.trees[v].leaf_for(bits);
            const double p1 = static_cast<double>(leaf.n1 + 1) / static_cast<double>(leaf.n0 + leaf.n1 + 2);
            bits[v] = rng.uniform() < p1 ? 1 : 0;
        }
        out.emplace_back(bits);
    }
    return out;
}

std::size_t default_window(std::size_t stringSize, std::size_t populationSize) {
    return std::max<std::size_t>(1, std::min(stringSize, populationSize / 20));
}

void rtr_replace(Population& pop, std::span<const Individual> offspring, RtrParams params,
                 RngStream& rng) {
    const std::size_t w = params.windowSize;
    if (w == 0 || w > pop.size()) {
        throw Error("rtr_replace: window size must be between 1 and the population size");
    }
    std::vector<std::size_t> perm(pop.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (const auto& child : offspring) {
        // Partial Fisher-Yates: the first w entries become a uniform random window.
        for (std::size_t i = 0; i < w; ++i) {
            std::swap(perm[i], perm[i + rng.below(perm.size() - i)]);
        }
        std::size_t nearest = perm[0];
        std::size_t nearest_d = hamming_distance(child, pop[nearest]);
        for (std::size_t i = 1; i < w; ++i) {
            const std::size_t idx = perm[i];
            const std::size_t d = hamming_distance(child, pop[idx]);
            if (d < nearest_d || (d == nearest_d && idx < nearest)) {
                nearest = idx;
                nearest_d = d;
            }
        }
        if (child.fitness() >= pop[nearest].fitness()) {
            pop[nearest] = child;
        }
    }
}

HboaAlgorithm::HboaAlgorithm(Params params) : params_(params) {
    if (params_.tournamentSize < 2) {
        throw Error("HBOA: tournament size must be at least 2");
    }
    if (!(params_.offspringFraction > 0.0 && params_.offspringFraction <= 1.0)) {
        throw Error("HBOA: offspring fraction must be in (0, 1]");
    }
}

void HboaAlgorithm::run_generation(Population& pop, GenerationContext& ctx) const {
    const std::size_t N = pop.size();
    const auto selected = select_tournament(pop, params_.tournamentSize, N, ctx.rng());
    const auto model = build_network(selected, params_.exec, &ctx.work().metricEvals);
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(params_.offspringFraction * static_cast<double>(N))));
    auto offspring = sample_network(model, count, ctx.rng());
    ctx.work().samples += offspring.size();
    ctx.evaluate_all(offspring);
    const std::size_t n = pop.front().size();
    const std::size_t w = params_.rtrWindow == 0 ? default_window(n, N) : std::min(params_.rtrWindow, N);
    rtr_replace(pop, offspring, {w}, ctx.rng());
}

}  // namespace evoport::hboa
