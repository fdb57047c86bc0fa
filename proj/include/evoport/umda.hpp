#pragma once

#include <vector>

#include "evoport/engine.hpp"

namespace evoport::umda {

/// p[i] is the probability that allele i is 1.
struct MarginalModel {
    std::vector<double> p;
};

/// Exact column frequencies of the selected set, no smoothing.
MarginalModel build_marginals(std::span<const Individual> selected);

Population sample_marginals(const MarginalModel& model, std::size_t count, RngStream& rng);

struct Params {
    std::size_t tournamentSize = 2;
    std::size_t eliteCount = 1;
};

class UmdaAlgorithm final : public Algorithm {
public:
    explicit UmdaAlgorithm(Params params = {});

    EngineKind kind() const noexcept override { return EngineKind::Umda; }
    void run_generation(Population& pop, GenerationContext& ctx) const override;

private:
    Params params_;
};

}  // namespace evoport::umda
