#pragma once

#include "mca/core/types.hpp"

namespace mca {

// DRX cycle model: cycles start at integer multiples of paging_cycle (t = 0
// anchored); each begins with on_duration AWAKE, SLEEP for the remainder.

/// Index of the cycle containing t.
long cycle_index(const SibConfig& sib, double t);

/// Earliest sleep window [start, end) at or after from_t.
Interval paging_schedule(const SibConfig& sib, double from_t);

bool in_on_duration(const SibConfig& sib, double t);

/// Smallest cycle start >= t.
double next_cycle_start(const SibConfig& sib, double t);

}  // namespace mca
