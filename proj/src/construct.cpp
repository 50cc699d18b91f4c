#include "apfree/construct.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace apfree {

NaturalSet greedy_ap_free(std::int64_t k, std::int64_t n) {
  if (k < 3) throw DomainError("progression length k must be at least 3, got " + std::to_string(k));
  if (n < 1) throw DomainError("n must be positive, got " + std::to_string(n));

  std::vector<bool> kept(static_cast<std::size_t>(n) + 1, false);
  std::vector<std::int64_t> chosen;
  for (std::int64_t x = 1; x <= n; ++x) {
    // x would be the last term of x-(k-1)d, ..., x; only d <= (x-1)/(k-1) fits.
    const std::int64_t max_diff = (x - 1) / (k - 1);
    bool completes = false;
    for (auto it = chosen.rbegin(); it != chosen.rend() && !completes; ++it) {
      const std::int64_t d = x - *it;
      if (d > max_diff) break;
      completes = true;
      for (std::int64_t i = 2; i < k; ++i) {
        if (!kept[static_cast<std::size_t>(x - i * d)]) {
          completes = false;
          break;
        }
      }
    }
    if (!completes) {
      kept[static_cast<std::size_t>(x)] = true;
      chosen.push_back(x);
    }
  }
  return NaturalSet(std::move(chosen));
}

namespace {

// Number of digit vectors in {0..d-1}^n at each squared norm.
std::vector<std::uint64_t> shell_counts(std::int64_t d, std::int64_t n) {
  const std::int64_t max_norm = n * (d - 1) * (d - 1);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_norm) + 1, 0);
  std::vector<std::uint64_t> next(counts.size(), 0);
  counts[0] = 1;
  std::int64_t reach = 0;
  for (std::int64_t pos = 0; pos < n; ++pos) {
    std::fill(next.begin(), next.begin() + reach + (d - 1) * (d - 1) + 1, 0);
    for (std::int64_t r = 0; r <= reach; ++r) {
      const std::uint64_t c = counts[static_cast<std::size_t>(r)];
      if (c == 0) continue;
      for (std::int64_t x = 0; x < d; ++x) next[static_cast<std::size_t>(r + x * x)] += c;
    }
    reach += (d - 1) * (d - 1);
    std::swap(counts, next);
  }
  return counts;
}

std::int64_t ipow(std::int64_t b, std::int64_t e) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < e; ++i) r = checked_mul(r, b);
  return r;
}

// Whether (2d-1)^n <= limit, without overflowing.
bool fits(std::int64_t d, std::int64_t n, std::int64_t limit) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    if (__builtin_mul_overflow(r, 2 * d - 1, &r) || r > limit) return false;
  }
  return true;
}

}  // namespace

bool BehrendParams::beats_pigeonhole() const {
  // shell_size * (n(d-1)^2 + 1) > d^n, in exact integers.
  const auto levels = static_cast<unsigned __int128>(dimension * (digit_bound - 1) * (digit_bound - 1) + 1);
  unsigned __int128 vectors = 1;
  for (std::int64_t i = 0; i < dimension; ++i) vectors *= static_cast<unsigned __int128>(digit_bound);
  return static_cast<unsigned __int128>(shell_size) * levels > vectors;
}

BehrendParams choose_behrend_params(std::int64_t n) {
  if (n < 2) throw DomainError("Behrend construction needs n >= 2, got " + std::to_string(n));

  BehrendParams best{1, 1, 0, 0};
  for (std::int64_t dim = 1; fits(2, dim, n); ++dim) {
    for (std::int64_t d = 2; fits(d, dim, n); ++d) {
      BehrendParams cand{d, dim, 0, 1};
      if (dim > 1) {
        // In one dimension every norm x^2 is distinct, so each shell has one vector.
        const auto counts = shell_counts(d, dim);
        const auto top = std::max_element(counts.begin(), counts.end());
        cand.shell_norm = static_cast<std::int64_t>(top - counts.begin());
        cand.shell_size = *top;
      }
      if (cand.shell_size > best.shell_size || (cand.shell_size == best.shell_size && dim > best.dimension)) {
        best = cand;
      }
    }
  }
  // Below n = 3 only the degenerate single-digit alphabet fits: the set {1}.
  if (best.shell_size == 0) best.shell_size = 1;
  return best;
}

NaturalSet behrend_set(const BehrendParams& params) {
  const std::int64_t d = params.digit_bound;
  const std::int64_t dim = params.dimension;
  const std::int64_t norm = params.shell_norm;
  if (d < 1 || dim < 1 || norm < 0 || norm > dim * (d - 1) * (d - 1)) {
    throw DomainError("invalid Behrend parameters");
  }
  const std::int64_t base = params.base();
  std::vector<std::int64_t> place(static_cast<std::size_t>(dim));
  for (std::int64_t i = 0; i < dim; ++i) place[static_cast<std::size_t>(i)] = ipow(base, i);

  // reachable[i][r]: positions i..dim-1 can contribute squared norm exactly r.
  const auto width = static_cast<std::size_t>(norm) + 1;
  std::vector<std::vector<bool>> reachable(static_cast<std::size_t>(dim) + 1, std::vector<bool>(width, false));
  reachable[static_cast<std::size_t>(dim)][0] = true;
  for (std::int64_t i = dim - 1; i >= 0; --i) {
    auto& here = reachable[static_cast<std::size_t>(i)];
    const auto& after = reachable[static_cast<std::size_t>(i) + 1];
    for (std::int64_t r = 0; r <= norm; ++r) {
      for (std::int64_t x = 0; x < d && x * x <= r; ++x) {
        if (after[static_cast<std::size_t>(r - x * x)]) {
          here[static_cast<std::size_t>(r)] = true;
          break;
        }
      }
    }
  }

  std::vector<std::int64_t> values;
  auto walk = [&](auto&& self, std::int64_t pos, std::int64_t remaining, std::int64_t value) -> void {
    if (pos == dim) {
      values.push_back(1 + value);
      return;
    }
    for (std::int64_t x = 0; x < d && x * x <= remaining; ++x) {
      if (reachable[static_cast<std::size_t>(pos) + 1][static_cast<std::size_t>(remaining - x * x)]) {
        self(self, pos + 1, remaining - x * x, value + x * place[static_cast<std::size_t>(pos)]);
      }
    }
  };
  if (reachable[0][static_cast<std::size_t>(norm)]) walk(walk, 0, norm, 0);
  std::sort(values.begin(), values.end());
  return NaturalSet(std::move(values));
}

NaturalSet behrend_set(std::int64_t n) { return behrend_set(choose_behrend_params(n)); }

PointSet theta(const NaturalSet& a, std::int64_t rows) {
  if (rows < 1) throw DomainError("rows must be positive, got " + std::to_string(rows));
  if (!a.empty()) checked_add(a.max(), rows);
  std::vector<Point> points;
  points.reserve(a.size() * static_cast<std::size_t>(rows));
  for (std::int64_t m = 1; m <= rows; ++m) {
    for (auto v : a) points.push_back({v + m, m});
  }
  return PointSet(std::move(points));
}

ApWitness grid_to_ap(const GridWitness& w) {
  w.validate();
  const std::int64_t center = w.x0 - w.y0;
  const std::int64_t reach = checked_mul(w.size - 1, w.side);
  if (center - reach < 1) {
    throw DomainError("grid does not lift to a progression of positive integers: x0 - y0 - (size-1)*side = " +
                      std::to_string(center - reach));
  }
  return ApWitness{center - reach, w.side, 2 * w.size - 1};
}

std::optional<GridWitness> ap_to_grid(const ApWitness& w, std::int64_t rows) {
  w.validate();
  if (w.length % 2 == 0) throw DomainError("progression length must be odd, got " + std::to_string(w.length));
  const std::int64_t s = (w.length + 1) / 2;
  const std::int64_t reach = checked_mul(s - 1, w.diff);
  if (reach >= rows) return std::nullopt;
  const std::int64_t center = checked_add(w.start, reach);
  GridWitness g{checked_add(center, 1), 1, w.diff, s};
  g.validate();
  return g;
}

}  // namespace apfree
