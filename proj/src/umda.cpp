#include "evoport/umda.hpp"

#include <algorithm>

namespace evoport::umda {

MarginalModel build_marginals(std::span<const Individual> selected) {
    if (selected.empty()) {
        throw Error("build_marginals: empty selection");
    }
    const std::size_t n = selected.front().size();
    std::vector<std::size_t> ones(n, 0);
    for (const auto& ind : selected) {
        if (ind.size() != n) {
            throw Error("build_marginals: individuals differ in length");
        }
        const auto bits = ind.bits();
        for (std::size_t i = 0; i < n; ++i) {
            ones[i] += bits[i];
        }
    }
    MarginalModel model;
    model.p.resize(n);
    const auto count = static_cast<double>(selected.size());
    for (std::size_t i = 0; i < n; ++i) {
        model.p[i] = static_cast<double>(ones[i]) / count;
    }
    return model;
}

Population sample_marginals(const MarginalModel& model, std::size_t count, RngStream& rng) {
    Population out;
    out.reserve(count);
    std::vector<std::uint8_t> bits(model.p.size());
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t i = 0; i < bits.size(); ++i) {
            bits[i] = rng.uniform() < model.p[i] ? 1 : 0;
        }
        out.emplace_back(bits);
    }
    return out;
}

UmdaAlgorithm::UmdaAlgorithm(Params params) : params_(params) {
    if (params_.tournamentSize < 2) {
        throw Error("UMDA: tournament size must be at least 2");
    }
}

void UmdaAlgorithm::run_generation(Population& pop, GenerationContext& ctx) const {
    const std::size_t elite = std::min(params_.eliteCount, pop.size() - 1);
    const auto selected = select_tournament(pop, params_.tournamentSize, pop.size(), ctx.rng());
    const auto model = build_marginals(selected);
    auto offspring = sample_marginals(model, pop.size() - elite, ctx.rng());
    ctx.work().samples += offspring.size();
    ctx.evaluate_all(offspring);
    elitist_replace(pop, std::move(offspring), elite);
}

}  // namespace evoport::umda
