#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "evoport/core.hpp"

namespace evoport {

class UnknownProblem : public Error {
public:
    using Error::Error;
};
class IncompatibleSize : public Error {
public:
    using Error::Error;
};
class DuplicateProblemId : public Error {
public:
    using Error::Error;
};

/// ZERO problems have the all-zeros string as optimum, ONE problems the all-ones string.
enum class Polarity { Zero, One };

struct ProblemSpec {
    int problemType = 10;
    std::size_t stringSize = 0;
    std::size_t blockSize = 1;
    double sigmaK = 0.0;
    Polarity target = Polarity::One;
};

/// Plugin interface for fitness functions. Implementations read alleles
/// through Individual::allele() and return the noiseless fitness.
class Problem {
public:
    virtual ~Problem() = default;
    virtual std::string name() const = 0;
    virtual double compute_fitness(const Individual& ind) const = 0;
};

/// A problem bound to a size and a noise level. Immutable and shareable.
class ProblemInstance {
public:
    ProblemInstance(ProblemSpec spec, std::shared_ptr<const Problem> problem);

    const ProblemSpec& spec() const noexcept { return spec_; }
    std::string name() const { return problem_->name(); }
    const std::shared_ptr<const Problem>& problem_ptr() const noexcept { return problem_; }

    /// Noiseless fitness; rejects individuals of the wrong length.
    double base_fitness(const Individual& ind) const;

    /// Base fitness plus one fresh N(0, sigmaK^2) draw when sigmaK > 0.
    /// Stores the result in ind and marks it evaluated.
    double compute_fitness(Individual& ind, RngStream& rng) const;

private:
    ProblemSpec spec_;
    std::shared_ptr<const Problem> problem_;
};

// Block payoffs. Unitation u counts target alleles (ones for ONE problems,
// zeros for ZERO problems).
double block_deceptive3(int u);
double block_trap_k(int u, int k);
double block_quadratic(int b0, int b1, Polarity target = Polarity::One);
double block_bipolar6(int u);

double overlapping_deceptive3(std::span<const std::uint8_t> bits, Polarity target = Polarity::One);
double uniform_blocks6(std::span<const std::uint8_t> bits, Polarity target = Polarity::One);

enum class HierarchicalVariant { One, Two };
/// Three-ary hierarchical trap over 3^L bits (L >= 2). Each level maps
/// triplets 000 -> 0, 111 -> 1 and anything else to null; a triplet with no
/// null input contributes trap(u) * 3^(level+1). The optimum is all ones.
double hierarchical_trap(std::span<const std::uint8_t> bits, HierarchicalVariant variant);

/// Extra knobs for catalog problems that the numeric ID does not fix.
struct ProblemOptions {
    std::size_t trapK = 5;
};

using ProblemFactory = std::function<std::shared_ptr<const Problem>(const ProblemSpec&)>;
/// Throws IncompatibleSize when the size does not fit the problem's structure.
using SizeCheck = std::function<void(std::size_t stringSize, const ProblemOptions&)>;

struct CatalogEntry {
    int id;
    std::string name;
};

/// Maps numeric problem IDs to problem factories. Built-in IDs are
/// 0-6, 10-16, 21 and 22; further IDs can be registered at runtime.
class ProblemRegistry {
public:
    ProblemRegistry();

    void register_problem(int id, std::string name, ProblemFactory factory,
                          SizeCheck check = {});

    bool contains(int id) const { return entries_.contains(id); }
    bool is_builtin(int id) const;

    /// Throws UnknownProblem or IncompatibleSize.
    void check(int id, std::size_t stringSize, const ProblemOptions& options = {}) const;

    ProblemInstance lookup(int id, std::size_t stringSize, double sigmaK,
                           const ProblemOptions& options = {}) const;

    std::vector<CatalogEntry> catalog() const;

private:
    struct Entry {
        std::string name;
        ProblemFactory factory;
        SizeCheck check;
        std::size_t blockSize = 1;
        Polarity target = Polarity::One;
        bool builtin = false;
    };
    std::map<int, Entry> entries_;
};

}  // namespace evoport
