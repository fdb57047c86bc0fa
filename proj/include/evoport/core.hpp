#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evoport {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Seeded random stream. Every stochastic operation takes one of these
/// explicitly; there is no global generator.
///
/// The engine is std::mt19937_64. The distributions are implemented here
/// rather than taken from <random> so that draw sequences are identical
/// across standard library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound). bound must be positive.
    std::size_t below(std::size_t bound);
    bool coin();
    /// Standard normal draw (Marsaglia polar method).
    double gaussian();

    /// Independent stream derived from this stream's seed and an index.
    /// Does not advance this stream.
    RngStream split(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Fixed-length string of zeros and ones with a cached fitness value.
class Individual {
public:
    Individual() = default;
    explicit Individual(std::vector<std::uint8_t> bits);

    /// Parses "0101"; whitespace is ignored, anything else is rejected.
    static Individual from_string(std::string_view text);

    std::size_t size() const noexcept { return bits_.size(); }
    int allele(std::size_t i) const { return bits_.at(i); }
    void set_allele(std::size_t i, int value);
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    bool evaluated() const noexcept { return evaluated_; }
    /// Throws when the individual has not been evaluated.
    double fitness() const;
    void set_fitness(double value) noexcept;
    void invalidate() noexcept { evaluated_ = false; }

    bool same_bits(const Individual& other) const noexcept { return bits_ == other.bits_; }
    Individual complement() const;
    std::string to_string() const;

private:
    std::vector<std::uint8_t> bits_;
    double fitness_ = 0.0;
    bool evaluated_ = false;
};

using Population = std::vector<Individual>;

/// Unevaluated individual with independent fair-coin alleles.
Individual new_random_individual(std::size_t string_size, RngStream& rng);

Population new_random_population(std::size_t count, std::size_t string_size, RngStream& rng);

double average_fitness(std::span<const Individual> pop);

/// Index of a maximal-fitness member; the lowest index wins ties.
std::size_t best_index(std::span<const Individual> pop);
const Individual& best_of(std::span<const Individual> pop);

std::size_t hamming_distance(const Individual& a, const Individual& b);

/// True when every member carries the same bit string.
bool is_converged(std::span<const Individual> pop);

std::size_t unitation(std::span<const std::uint8_t> bits) noexcept;

}  // namespace evoport
