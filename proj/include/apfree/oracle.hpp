#pragma once

// Exhaustive reference for the extremal searches: enumerates every subset as a
// bitmask and rejects it if any pattern mask is contained in it. Shares no
// code with the branch-and-bound or the core detectors.

#include <cstdint>

#include "apfree/search.hpp"

namespace apfree::oracle {

inline constexpr std::int64_t kMaxApUniverse = 24;
inline constexpr std::int64_t kMaxGridSide = 4;

/// Requires 1 <= n <= 24.
ApSearchResult max_ap_free(std::int64_t k, std::int64_t n);

/// Requires 1 <= n <= 4.
GridSearchResult max_grid_free(std::int64_t s, std::int64_t n);

}  // namespace apfree::oracle
