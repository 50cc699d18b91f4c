#pragma once

// Exact extremal search for r(k, N) (largest k-AP-free subset of {1..N}) and
// the grid analogue over {1..N}^2.
//
// Both searches build a table of the extremal value for every prefix size
// m = 1..N. Level m is a depth-first branch and bound over candidates in
// increasing order, pruned by
//
//   chosen + min(non-forbidden candidates left, table[candidates left]) <= best
//
// and seeded with best = table[m-1] - 1, since table[m-1] <= table[m] <=
// table[m-1] + 1 (one more row of width N for the grid table). The first set
// that reaches the final value in depth-first order is the lexicographically
// smallest optimum, so ties need no extra bookkeeping.

#include <chrono>
#include <cstdint>
#include <optional>

#include "apfree/core.hpp"

namespace apfree {

enum class TieBreak { lexicographic_smallest };

struct SearchConfig {
  /// DFS node expansions allowed before returning a non-exact lower bound.
  std::optional<std::uint64_t> node_budget;
  TieBreak tie_break = TieBreak::lexicographic_smallest;
  /// Worker threads for the 1-D search; 0 means APFREE_THREADS or the
  /// hardware concurrency. Budgeted searches always run on one thread.
  unsigned threads = 0;
};

template <typename Optimum>
struct SearchResult {
  std::int64_t value = 0;
  Optimum optimum;
  /// False when the node budget ran out: value is then only a lower bound.
  bool exact = true;
  std::uint64_t nodes_explored = 0;
  std::chrono::duration<double> elapsed{0};
};

using ApSearchResult = SearchResult<NaturalSet>;
using GridSearchResult = SearchResult<PointSet>;

/// Worker count after applying the APFREE_THREADS cap.
unsigned resolve_threads(unsigned requested);

ApSearchResult max_ap_free(std::int64_t k, std::int64_t n, const SearchConfig& cfg = {});
GridSearchResult max_grid_free(std::int64_t s, std::int64_t n, const SearchConfig& cfg = {});

struct CertifiedBound {
  /// r(2s-1, N) * N.
  std::int64_t bound = 0;
  /// theta(A*, N) for the optimal progression-free A*; checked grid-free.
  PointSet certificate;
  bool exact = true;
  ApSearchResult ap_free;
};

/// Lower bound on the grid-free extremal value over {1..2N}^2 obtained by
/// lifting an optimal (2s-1)-AP-free subset of {1..N}.
CertifiedBound certified_lower_bound(std::int64_t s, std::int64_t n, const SearchConfig& cfg = {});

}  // namespace apfree
