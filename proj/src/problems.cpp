#include "evoport/problems.hpp"

#include <cmath>
#include <utility>

namespace evoport {

ProblemInstance::ProblemInstance(ProblemSpec spec, std::shared_ptr<const Problem> problem)
    : spec_(spec), problem_(std::move(problem)) {
    if (!problem_) {
        throw Error("ProblemInstance: null problem");
    }
    if (spec_.sigmaK < 0.0 || !std::isfinite(spec_.sigmaK)) {
        throw Error("ProblemInstance: sigmaK must be a finite value >= 0");
    }
}

double ProblemInstance::base_fitness(const Individual& ind) const {
    if (ind.size() != spec_.stringSize) {
        throw Error("compute_fitness: individual has " + std::to_string(ind.size()) +
                    " bits, problem expects " + std::to_string(spec_.stringSize));
    }
    return problem_->compute_fitness(ind);
}

double ProblemInstance::compute_fitness(Individual& ind, RngStream& rng) const {
    double f = base_fitness(ind);
    if (spec_.sigmaK > 0.0) {
        f += spec_.sigmaK * rng.gaussian();
    }
    ind.set_fitness(f);
    return f;
}

double block_deceptive3(int u) {
    switch (u) {
    case 0: return 0.9;
    case 1: return 0.8;
    case 2: return 0.0;
    case 3: return 1.0;
    default: throw Error("block_deceptive3: unitation out of range");
    }
}

double block_trap_k(int u, int k) {
    if (k < 1 || u < 0 || u > k) {
        throw Error("block_trap_k: unitation out of range");
    }
    return u == k ? static_cast<double>(k) : static_cast<double>(k - 1 - u);
}

double block_quadratic(int b0, int b1, Polarity target) {
    if ((b0 != 0 && b0 != 1) || (b1 != 0 && b1 != 1)) {
        throw Error("block_quadratic: alleles must be 0 or 1");
    }
    int u = b0 + b1;
    if (target == Polarity::Zero) {
        u = 2 - u;
    }
    if (u == 2) return 1.0;
    if (u == 0) return 0.9;
    return 0.0;
}

double block_bipolar6(int u) {
    if (u < 0 || u > 6) {
        throw Error("block_bipolar6: unitation out of range");
    }
    return block_deceptive3(std::abs(u - 3));
}

namespace {

int target_unitation(std::span<const std::uint8_t> block, Polarity target) {
    const auto ones = static_cast<int>(unitation(block));
    return target == Polarity::One ? ones : static_cast<int>(block.size()) - ones;
}

template <typename BlockFn>
double sum_blocks(std::span<const std::uint8_t> bits, std::size_t k, Polarity target, BlockFn fn) {
    double total = 0.0;
    for (std::size_t i = 0; i + k <= bits.size(); i += k) {
        total += fn(target_unitation(bits.subspan(i, k), target));
    }
    return total;
}

}  // namespace

double overlapping_deceptive3(std::span<const std::uint8_t> bits, Polarity target) {
    if (bits.size() < 3 || bits.size() % 2 == 0) {
        throw IncompatibleSize("3-Deceptive Overlapping needs an odd string size >= 3");
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 3 <= bits.size(); i += 2) {
        total += block_deceptive3(target_unitation(bits.subspan(i, 3), target));
    }
    return total;
}

double uniform_blocks6(std::span<const std::uint8_t> bits, Polarity target) {
    if (bits.empty() || bits.size() % 6 != 0) {
        throw IncompatibleSize("Uniform 6-Blocks needs a string size that is a multiple of 6");
    }
    return sum_blocks(bits, 6, target, [](int u) { return u == 6 ? 1.0 : 0.0; });
}

namespace {

std::size_t levels_of(std::size_t n) {
    std::size_t levels = 0;
    while (n > 1 && n % 3 == 0) {
        n /= 3;
        ++levels;
    }
    return n == 1 ? levels : 0;
}

double trap3(int u, double high, double low) {
    return u == 3 ? high : low * (1.0 - static_cast<double>(u) / 2.0);
}

}  // namespace

double hierarchical_trap(std::span<const std::uint8_t> bits, HierarchicalVariant variant) {
    const std::size_t levels = levels_of(bits.size());
    if (levels < 2) {
        throw IncompatibleSize("hierarchical trap needs a string size 3^L with L >= 2");
    }
    constexpr int kNull = -1;
    std::vector<int> symbols(bits.begin(), bits.end());
    double total = 0.0;
    double scale = 3.0;
    for (std::size_t level = 0; level < levels; ++level) {
        const bool top = level + 1 == levels;
        const double high = 1.0;
        double low = 1.0;
        if (top) {
            low = 0.9;
        } else if (variant == HierarchicalVariant::Two) {
            low = 0.9 + 0.1 / static_cast<double>(levels);
        }
        std::vector<int> next(symbols.size() / 3, kNull);
        for (std::size_t b = 0; b < next.size(); ++b) {
            const int s0 = symbols[3 * b];
            const int s1 = symbols[3 * b + 1];
            const int s2 = symbols[3 * b + 2];
            if (s0 == kNull || s1 == kNull || s2 == kNull) {
                continue;
            }
            const int u = s0 + s1 + s2;
            total += scale * trap3(u, high, low);
            if (u == 0) {
                next[b] = 0;
            } else if (u == 3) {
                next[b] = 1;
            }
        }
        symbols = std::move(next);
        scale *= 3.0;
    }
    return total;
}

namespace {

enum class Kind {
    Max,
    Quadratic,
    Deceptive,
    Bipolar,
    Overlapping,
    Trap,
    Uniform,
    HierarchicalOne,
    HierarchicalTwo
};

class CatalogProblem final : public Problem {
public:
    CatalogProblem(Kind kind, std::string name, Polarity target, std::size_t k)
        : kind_(kind), name_(std::move(name)), target_(target), k_(k) {}

    std::string name() const override { return name_; }

    double compute_fitness(const Individual& ind) const override {
        const auto bits = ind.bits();
        switch (kind_) {
        case Kind::Max:
            return static_cast<double>(target_unitation(bits, target_));
        case Kind::Quadratic: {
            double total = 0.0;
            for (std::size_t i = 0; i + 2 <= bits.size(); i += 2) {
                total += block_quadratic(bits[i], bits[i + 1], target_);
            }
            return total;
        }
        case Kind::Deceptive:
            return sum_blocks(bits, 3, target_, block_deceptive3);
        case Kind::Bipolar:
            return sum_blocks(bits, 6, target_, block_bipolar6);
        case Kind::Overlapping:
            return overlapping_deceptive3(bits, target_);
        case Kind::Trap: {
            const int k = static_cast<int>(k_);
            return sum_blocks(bits, k_, target_, [k](int u) { return block_trap_k(u, k); });
        }
        case Kind::Uniform:
            return uniform_blocks6(bits, target_);
        case Kind::HierarchicalOne:
            return hierarchical_trap(bits, HierarchicalVariant::One);
        case Kind::HierarchicalTwo:
            return hierarchical_trap(bits, HierarchicalVariant::Two);
        }
        return 0.0;
    }

private:
    Kind kind_;
    std::string name_;
    Polarity target_;
    std::size_t k_;
};

void require_multiple(std::size_t n, std::size_t k, const std::string& what) {
    if (n == 0 || n % k != 0) {
        throw IncompatibleSize(what + " needs a string size that is a positive multiple of " +
                               std::to_string(k) + " (got " + std::to_string(n) + ")");
    }
}

SizeCheck size_check_for(Kind kind) {
    switch (kind) {
    case Kind::Max:
        return [](std::size_t n, const ProblemOptions&) { require_multiple(n, 1, "Max"); };
    case Kind::Quadratic:
        return [](std::size_t n, const ProblemOptions&) { require_multiple(n, 2, "Quadratic"); };
    case Kind::Deceptive:
        return [](std::size_t n, const ProblemOptions&) { require_multiple(n, 3, "3-Deceptive"); };
    case Kind::Bipolar:
    case Kind::Uniform:
        return [](std::size_t n, const ProblemOptions&) { require_multiple(n, 6, "6-bit block problem"); };
    case Kind::Overlapping:
        return [](std::size_t n, const ProblemOptions&) {
            if (n < 3 || n % 2 == 0) {
                throw IncompatibleSize("3-Deceptive Overlapping needs an odd string size >= 3 (got " +
                                       std::to_string(n) + ")");
            }
        };
    case Kind::Trap:
        return [](std::size_t n, const ProblemOptions& opt) {
            if (opt.trapK < 2) {
                throw IncompatibleSize("Concatenated Trap-k needs k >= 2");
            }
            require_multiple(n, opt.trapK, "Concatenated Trap-" + std::to_string(opt.trapK));
        };
    case Kind::HierarchicalOne:
    case Kind::HierarchicalTwo:
        return [](std::size_t n, const ProblemOptions&) {
            if (levels_of(n) < 2) {
                throw IncompatibleSize("hierarchical traps need a string size 3^L with L >= 2 (got " +
                                       std::to_string(n) + ")");
            }
        };
    }
    return {};
}

struct BuiltinDef {
    int id;
    const char* name;
    Kind kind;
    Polarity target;
    std::size_t blockSize;  // 0 = trapK
};

constexpr BuiltinDef kBuiltins[] = {
    {0, "ZeroMax", Kind::Max, Polarity::Zero, 1},
    {1, "ZeroQuadratic", Kind::Quadratic, Polarity::Zero, 2},
    {2, "Zero3Deceptive", Kind::Deceptive, Polarity::Zero, 3},
    {3, "Zero3DeceptiveBipolar", Kind::Bipolar, Polarity::Zero, 6},
    {4, "Zero3DeceptiveOverlapping", Kind::Overlapping, Polarity::Zero, 3},
    {5, "ZeroConcatenatedTrapK", Kind::Trap, Polarity::Zero, 0},
    {6, "ZeroUniform6Blocks", Kind::Uniform, Polarity::Zero, 6},
    {10, "OneMax", Kind::Max, Polarity::One, 1},
    {11, "Quadratic", Kind::Quadratic, Polarity::One, 2},
    {12, "3Deceptive", Kind::Deceptive, Polarity::One, 3},
    {13, "3DeceptiveBipolar", Kind::Bipolar, Polarity::One, 6},
    {14, "3DeceptiveOverlapping", Kind::Overlapping, Polarity::One, 3},
    {15, "ConcatenatedTrapK", Kind::Trap, Polarity::One, 0},
    {16, "Uniform6Blocks", Kind::Uniform, Polarity::One, 6},
    {21, "HierarchicalTrapOne", Kind::HierarchicalOne, Polarity::One, 3},
    {22, "HierarchicalTrapTwo", Kind::HierarchicalTwo, Polarity::One, 3},
};

}  // namespace

ProblemRegistry::ProblemRegistry() {
    for (const auto& def : kBuiltins) {
        Entry e;
        e.name = def.name;
        e.check = size_check_for(def.kind);
        e.blockSize = def.blockSize;
        e.target = def.target;
        e.builtin = true;
        const Kind kind = def.kind;
        const std::string name = def.name;
        e.factory = [kind, name](const ProblemSpec& spec) {
            return std::make_shared<const CatalogProblem>(kind, name, spec.target, spec.blockSize);
        };
        entries_.emplace(def.id, std::move(e));
    }
}

void ProblemRegistry::register_problem(int id, std::string name, ProblemFactory factory,
                                       SizeCheck check) {
    if (entries_.contains(id)) {
        throw DuplicateProblemId("problem ID " + std::to_string(id) + " is already registered as " +
                                 entries_.at(id).name);
    }
    if (!factory) {
        throw Error("register_problem: empty factory");
    }
    Entry e;
    e.name = std::move(name);
    e.factory = std::move(factory);
    e.check = std::move(check);
    entries_.emplace(id, std::move(e));
}

bool ProblemRegistry::is_builtin(int id) const {
    auto it = entries_.find(id);
    return it != entries_.end() && it->second.builtin;
}

void ProblemRegistry::check(int id, std::size_t stringSize, const ProblemOptions& options) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        throw UnknownProblem("unknown problemType " + std::to_string(id));
    }
    if (stringSize == 0) {
        throw IncompatibleSize("stringSize must be at least 1");
    }
    if (it->second.check) {
        it->second.check(stringSize, options);
    }
}

ProblemInstance ProblemRegistry::lookup(int id, std::size_t stringSize, double sigmaK,
                                        const ProblemOptions& options) const {
    check(id, stringSize, options);
    const Entry& e = entries_.at(id);
    ProblemSpec spec;
    spec.problemType = id;
    spec.stringSize = stringSize;
    spec.blockSize = e.blockSize == 0 ? options.trapK : e.blockSize;
    spec.sigmaK = sigmaK;
    spec.target = e.target;
    return ProblemInstance(spec, e.factory(spec));
}

std::vector<CatalogEntry> ProblemRegistry::catalog() const {
    std::vector<CatalogEntry> out;
    for (const auto& [id, e] : entries_) {
        out.push_back({id, e.name});
    }
    return out;
}

}  // namespace evoport
