#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "evoport/core.hpp"

namespace evoport {

/// Execution policy for the model-building kernels. Both policies produce
/// bit-identical results: every score is computed independently and the
/// reduction that picks a winner is always serial.
enum class Exec { Serial, Parallel };

/// Minimum number of elementary steps before a kernel goes parallel.
inline constexpr std::size_t kParallelGrain = std::size_t{1} << 15;

bool openmp_enabled() noexcept;
int kernel_threads() noexcept;

/// Column-major copy of the alleles of a population.
class BitColumns {
public:
    BitColumns() = default;
    explicit BitColumns(std::span<const Individual> pop);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const std::uint8_t> column(std::size_t j) const {
        return {data_.data() + j * rows_, rows_};
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> data_;
};

}  // namespace evoport
