#include "mca/sim/drx.hpp"

#include <cmath>

namespace mca {

namespace {
// Absorbs representation error at cycle boundaries (e.g. 0.3 / 0.1).
constexpr double kBoundaryEps = 1e-9;
}

long cycle_index(const SibConfig& sib, double t) {
    return static_cast<long>(std::floor(t / sib.paging_cycle + kBoundaryEps));
}

Interval paging_schedule(const SibConfig& sib, double from_t) {
    const double start = static_cast<double>(cycle_index(sib, from_t)) * sib.paging_cycle;
    const double sleep_from = start + sib.on_duration;
    const double end = start + sib.paging_cycle;
    return {from_t < sleep_from ? sleep_from : from_t, end};
}

bool in_on_duration(const SibConfig& sib, double t) {
    const double start = static_cast<double>(cycle_index(sib, t)) * sib.paging_cycle;
    return t < start + sib.on_duration;
}

double next_cycle_start(const SibConfig& sib, double t) {
    const double k = std::ceil(t / sib.paging_cycle - kBoundaryEps);
    return k * sib.paging_cycle;
}

}  // namespace mca
