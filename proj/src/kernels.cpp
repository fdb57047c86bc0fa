#include "evoport/kernels.hpp"

#ifdef EVOPORT_HAVE_OPENMP
#include <omp.h>
#endif

namespace evoport {

bool openmp_enabled() noexcept {
#ifdef EVOPORT_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

int kernel_threads() noexcept {
#ifdef EVOPORT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

BitColumns::BitColumns(std::span<const Individual> pop)
    : rows_(pop.size()), cols_(pop.empty() ? 0 : pop.front().size()), data_(rows_ * cols_) {
    for (std::size_t r = 0; r < rows_; ++r) {
        const auto bits = pop[r].bits();
        if (bits.size() != cols_) {
            throw Error("BitColumns: individuals differ in length");
        }
        for (std::size_t c = 0; c < cols_; ++c) {
            data_[c * rows_ + r] = bits[c];
        }
    }
}

}  // namespace evoport
