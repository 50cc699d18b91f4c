#include "apfree/oracle.hpp"

#include <bit>
#include <string>
#include <vector>

namespace apfree::oracle {

namespace {

using Clock = std::chrono::steady_clock;

// Among equal-size sets, the one holding the lowest differing element comes
// first when both are read as increasing sequences.
bool lex_smaller(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  return diff != 0 && (a & (diff & (~diff + 1))) != 0;
}

struct Best {
  std::uint64_t mask = 0;
  int size = 0;
  std::uint64_t visited = 0;
};

Best enumerate(int bits, const std::vector<std::uint64_t>& patterns) {
  Best best;
  const std::uint64_t limit = std::uint64_t{1} << bits;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    ++best.visited;
    const int size = std::popcount(mask);
    if (size < best.size) continue;
    bool clean = true;
    for (auto p : patterns) {
      if ((mask & p) == p) {
        clean = false;
        break;
      }
    }
    if (!clean) continue;
    if (size > best.size || lex_smaller(mask, best.mask)) {
      best.size = size;
      best.mask = mask;
    }
  }
  return best;
}

}  // namespace

ApSearchResult max_ap_free(std::int64_t k, std::int64_t n) {
  if (k < 3) throw DomainError("progression length k must be at least 3");
  if (n < 1 || n > kMaxApUniverse) throw DomainError("oracle needs 1 <= n <= 24, got " + std::to_string(n));
  const auto started = Clock::now();

  // Element v is bit v-1.
  std::vector<std::uint64_t> patterns;
  for (std::int64_t start = 1; start <= n; ++start) {
    for (std::int64_t d = 1; start + (k - 1) * d <= n; ++d) {
      std::uint64_t p = 0;
      for (std::int64_t i = 0; i < k; ++i) p |= std::uint64_t{1} << (start + i * d - 1);
      patterns.push_back(p);
    }
  }
  const Best best = enumerate(static_cast<int>(n), patterns);

  std::vector<std::int64_t> elements;
  for (std::int64_t v = 1; v <= n; ++v) {
    if ((best.mask >> (v - 1)) & 1U) elements.push_back(v);
  }
  ApSearchResult r;
  r.value = best.size;
  r.optimum = NaturalSet(std::move(elements));
  r.nodes_explored = best.visited;
  r.elapsed = Clock::now() - started;
  return r;
}

GridSearchResult max_grid_free(std::int64_t s, std::int64_t n) {
  if (s < 2) throw DomainError("grid size s must be at least 2");
  if (n < 1 || n > kMaxGridSide) throw DomainError("oracle needs 1 <= n <= 4, got " + std::to_string(n));
  const auto started = Clock::now();

  // Point (x, y) is bit (y-1)*n + (x-1): row-major order.
  auto bit = [n](std::int64_t x, std::int64_t y) { return std::uint64_t{1} << ((y - 1) * n + (x - 1)); };
  std::vector<std::uint64_t> patterns;
  for (std::int64_t side = 1; 1 + (s - 1) * side <= n; ++side) {
    for (std::int64_t y0 = 1; y0 + (s - 1) * side <= n; ++y0) {
      for (std::int64_t x0 = 1; x0 + (s - 1) * side <= n; ++x0) {
        std::uint64_t p = 0;
        for (std::int64_t j = 0; j < s; ++j) {
          for (std::int64_t i = 0; i < s; ++i) p |= bit(x0 + i * side, y0 + j * side);
        }
        patterns.push_back(p);
      }
    }
  }
  const Best best = enumerate(static_cast<int>(n * n), patterns);

  std::vector<Point> points;
  for (std::int64_t y = 1; y <= n; ++y) {
    for (std::int64_t x = 1; x <= n; ++x) {
      if (best.mask & bit(x, y)) points.push_back({x, y});
    }
  }
  GridSearchResult r;
  r.value = best.size;
  r.optimum = PointSet(std::move(points));
  r.nodes_explored = best.visited;
  r.elapsed = Clock::now() - started;
  return r;
}

}  // namespace apfree::oracle
