#include "evoport/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace evoport {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::below(std::size_t bound) {
    if (bound == 0) {
        throw Error("RngStream::below: bound must be positive");
    }
    const auto b = static_cast<std::uint64_t>(bound);
    // Reject the top partial bucket so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % b;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % b);
}

bool RngStream::coin() { return (next_u64() >> 63) != 0; }

double RngStream::gaussian() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    return u * scale;
}

RngStream RngStream::split(std::uint64_t index) const {
    return RngStream(splitmix64(seed_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

Individual::Individual(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) {
            throw Error("Individual: alleles must be 0 or 1");
        }
    }
}

Individual Individual::from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c != ' ' && c != '\t' && c != '\n') {
            throw Error("Individual::from_string: unexpected character '" + std::string(1, c) + "'");
        }
    }
    return Individual(std::move(bits));
}

void Individual::set_allele(std::size_t i, int value) {
    if (value != 0 && value != 1) {
        throw Error("Individual::set_allele: allele must be 0 or 1");
    }
    bits_.at(i) = static_cast<std::uint8_t>(value);
    evaluated_ = false;
}

double Individual::fitness() const {
    if (!evaluated_) {
        throw Error("Individual::fitness: individual has not been evaluated");
    }
    return fitness_;
}

void Individual::set_fitness(double value) noexcept {
    fitness_ = value;
    evaluated_ = true;
}

Individual Individual::complement() const {
    std::vector<std::uint8_t> out(bits_.size());
    std::transform(bits_.begin(), bits_.end(), out.begin(),
                   [](std::uint8_t b) { return static_cast<std::uint8_t>(1 - b); });
    return Individual(std::move(out));
}

std::string Individual::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        s[i] = bits_[i] ? '1' : '0';
    }
    return s;
}

Individual new_random_individual(std::size_t string_size, RngStream& rng) {
    if (string_size == 0) {
        throw Error("new_random_individual: string size must be at least 1");
    }
    std::vector<std::uint8_t> bits(string_size);
    for (auto& b : bits) {
        b = rng.coin() ? 1 : 0;
    }
    return Individual(std::move(bits));
}

Population new_random_population(std::size_t count, std::size_t string_size, RngStream& rng) {
    Population pop;
    pop.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        pop.push_back(new_random_individual(string_size, rng));
    }
    return pop;
}

double average_fitness(std::span<const Individual> pop) {
    if (pop.empty()) {
        throw Error("average_fitness: empty population");
    }
    double sum = 0.0;
    for (const auto& ind : pop) {
        sum += ind.fitness();
    }
    return sum / static_cast<double>(pop.size());
}

std::size_t best_index(std::span<const Individual> pop) {
    if (pop.empty()) {
        throw Error("best_of: empty population");
    }
    std::size_t best = 0;
    double best_fitness = pop[0].fitness();
    for (std::size_t i = 1; i < pop.size(); ++i) {
        const double f = pop[i].fitness();
        if (f > best_fitness) {
            best_fitness = f;
            best = i;
        }
    }
    return best;
}

const Individual& best_of(std::span<const Individual> pop) { return pop[best_index(pop)]; }

std::size_t hamming_distance(const Individual& a, const Individual& b) {
    if (a.size() != b.size()) {
        throw Error("hamming_distance: length mismatch");
    }
    const auto x = a.bits();
    const auto y = b.bits();
    std::size_t d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d += x[i] != y[i];
    }
    return d;
}

bool is_converged(std::span<const Individual> pop) {
    return std::all_of(pop.begin(), pop.end(),
                       [&](const Individual& ind) { return ind.same_bits(pop.front()); });
}

std::size_t unitation(std::span<const std::uint8_t> bits) noexcept {
    return std::accumulate(bits.begin(), bits.end(), std::size_t{0});
}

}  // namespace evoport
