#include "apfree/search.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "apfree/construct.hpp"
#include "apfree/kernels.hpp"

namespace apfree {

namespace {

using Clock = std::chrono::steady_clock;

// Node budget shared by the sequential (budgeted) search path.
struct Budget {
  std::optional<std::uint64_t> limit;
  std::uint64_t used = 0;

  bool spend() {
    if (limit && used >= *limit) return false;
    ++used;
    return true;
  }
};

std::size_t words_for(std::int64_t bits) { return static_cast<std::size_t>((bits + 64) / 64); }

inline bool test_bit(std::span<const std::uint64_t> words, std::int64_t bit) {
  return (words[static_cast<std::size_t>(bit) >> 6] >> (bit & 63)) & 1U;
}
inline void set_bit(std::span<std::uint64_t> words, std::int64_t bit) {
  words[static_cast<std::size_t>(bit) >> 6] |= std::uint64_t{1} << (bit & 63);
}
inline void clear_bit(std::span<std::uint64_t> words, std::int64_t bit) {
  words[static_cast<std::size_t>(bit) >> 6] &= ~(std::uint64_t{1} << (bit & 63));
}

// ---------------------------------------------------------------------------
// 1-D search

// Bits c..m set, for every c in 1..m+1.
class SuffixMasks {
 public:
  explicit SuffixMasks(std::int64_t m) : words_(words_for(m)), masks_((static_cast<std::size_t>(m) + 2) * words_, 0) {
    for (std::int64_t c = m; c >= 1; --c) {
      auto here = mask_mut(c);
      auto after = mask(c + 1);
      std::copy(after.begin(), after.end(), here.begin());
      set_bit(here, c);
    }
  }

  std::span<const std::uint64_t> mask(std::int64_t c) const {
    return std::span<const std::uint64_t>(masks_).subspan(static_cast<std::size_t>(c) * words_, words_);
  }

 private:
  std::span<std::uint64_t> mask_mut(std::int64_t c) {
    return std::span<std::uint64_t>(masks_).subspan(static_cast<std::size_t>(c) * words_, words_);
  }

  std::size_t words_;
  std::vector<std::uint64_t> masks_;
};

struct SubtreeOutcome {
  std::int64_t best = 0;
  std::vector<std::int64_t> set;
  std::uint64_t nodes = 0;
  bool hit_cap = false;
  bool aborted = false;
  bool ran = false;
};

// Branch and bound over the subsets of {1..m} whose smallest element is fixed.
class ApSubtreeSearch {
 public:
  ApSubtreeSearch(std::int64_t k, std::int64_t m, std::span<const std::int64_t> table, std::int64_t cap,
                  std::int64_t floor, const SuffixMasks& suffix, Budget* budget)
      : k_(k),
        m_(m),
        table_(table),
        cap_(cap),
        suffix_(suffix),
        budget_(budget),
        words_(words_for(m)),
        chosen_bits_(words_, 0),
        forbidden_((static_cast<std::size_t>(m) + 2) * words_, 0) {
    out_.best = floor;
  }

  SubtreeOutcome run(std::int64_t first) {
    out_.ran = true;
    if (upper_bound(first, forbidden_at(0)) <= out_.best) return std::move(out_);
    push(first, 0);
    dfs(first + 1, 1);
    return std::move(out_);
  }

 private:
  std::int64_t table_bound(std::int64_t left) const {
    return left < m_ ? table_[static_cast<std::size_t>(left)] : cap_;
  }

  std::int64_t upper_bound(std::int64_t c, std::span<const std::uint64_t> forbidden) const {
    const auto free = static_cast<std::int64_t>(kernels::andnot_popcount(suffix_.mask(c), forbidden));
    return std::min(free, table_bound(m_ - c + 1));
  }

  std::span<std::uint64_t> forbidden_at(std::size_t depth) {
    return std::span<std::uint64_t>(forbidden_).subspan(depth * words_, words_);
  }

  // Adds c on top of a chosen set of size `depth` and derives the forbidden
  // set for depth + 1: every y = c + d that would end a k-term progression
  // whose other terms c, c-d, ..., c-(k-2)d are all chosen.
  void push(std::int64_t c, std::size_t depth) {
    auto parent = forbidden_at(depth);
    auto child = forbidden_at(depth + 1);
    std::copy(parent.begin(), parent.end(), child.begin());
    for (auto it = chosen_.rbegin(); it != chosen_.rend(); ++it) {
      const std::int64_t a = *it;
      const std::int64_t d = c - a;
      const std::int64_t y = c + d;
      if (y > m_) break;
      bool all = true;
      for (std::int64_t i = 1; i <= k_ - 3; ++i) {
        const std::int64_t t = a - i * d;
        if (t < 1 || !test_bit(chosen_bits_, t)) {
          all = false;
          break;
        }
      }
      if (all) set_bit(child, y);
    }
    chosen_.push_back(c);
    set_bit(chosen_bits_, c);
  }

  void pop() {
    clear_bit(chosen_bits_, chosen_.back());
    chosen_.pop_back();
  }

  void dfs(std::int64_t pos, std::size_t depth) {
    if (budget_ && !budget_->spend()) {
      out_.aborted = stop_ = true;
      return;
    }
    ++out_.nodes;
    const auto size = static_cast<std::int64_t>(chosen_.size());
    if (size > out_.best) {
      out_.best = size;
      out_.set = chosen_;
      if (size >= cap_) {
        out_.hit_cap = stop_ = true;
        return;
      }
    }
    for (std::int64_t c = pos; c <= m_ && !stop_; ++c) {
      auto forbidden = forbidden_at(depth);
      if (size + upper_bound(c, forbidden) <= out_.best) break;
      if (test_bit(forbidden, c)) continue;
      push(c, depth);
      dfs(c + 1, depth + 1);
      pop();
    }
  }

  std::int64_t k_;
  std::int64_t m_;
  std::span<const std::int64_t> table_;
  std::int64_t cap_;
  const SuffixMasks& suffix_;
  Budget* budget_;
  std::size_t words_;
  std::vector<std::int64_t> chosen_;
  std::vector<std::uint64_t> chosen_bits_;
  std::vector<std::uint64_t> forbidden_;
  SubtreeOutcome out_;
  bool stop_ = false;
};

struct LevelOutcome {
  std::int64_t value = 0;
  std::vector<std::int64_t> set;
  std::uint64_t nodes = 0;
  bool aborted = false;
};

// One table level: every subtree rooted at a first element runs with only its
// own incumbent, so node counts and the winner are independent of scheduling.
// Subtrees after the first one to reach the cap are irrelevant and skipped.
LevelOutcome search_level(std::int64_t k, std::int64_t m, std::span<const std::int64_t> table, unsigned threads,
                          Budget* budget) {
  const std::int64_t cap = table[static_cast<std::size_t>(m - 1)] + 1;
  const std::int64_t floor = std::max<std::int64_t>(table[static_cast<std::size_t>(m - 1)] - 1, 0);
  const SuffixMasks suffix(m);
  std::vector<SubtreeOutcome> outcomes(static_cast<std::size_t>(m) + 1);

  if (threads <= 1 || budget) {
    for (std::int64_t first = 1; first <= m; ++first) {
      auto& out = outcomes[static_cast<std::size_t>(first)];
      out = ApSubtreeSearch(k, m, table, cap, floor, suffix, budget).run(first);
      if (out.hit_cap || out.aborted) break;
    }
  } else {
    std::atomic<std::int64_t> next{1};
    std::atomic<std::int64_t> first_cap{std::numeric_limits<std::int64_t>::max()};
    auto worker = [&] {
      for (std::int64_t first = next.fetch_add(1); first <= m; first = next.fetch_add(1)) {
        if (first > first_cap.load()) continue;
        auto out = ApSubtreeSearch(k, m, table, cap, floor, suffix, nullptr).run(first);
        if (out.hit_cap) {
          std::int64_t seen = first_cap.load();
          while (first < seen && !first_cap.compare_exchange_weak(seen, first)) {
          }
        }
        outcomes[static_cast<std::size_t>(first)] = std::move(out);
      }
    };
    std::vector<std::jthread> pool;
    const unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(m));
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  }

  LevelOutcome level;
  level.value = floor;
  for (std::int64_t first = 1; first <= m; ++first) {
    auto& out = outcomes[static_cast<std::size_t>(first)];
    if (!out.ran) break;
    level.nodes += out.nodes;
    if (out.best > level.value) {
      level.value = out.best;
      level.set = std::move(out.set);
    }
    if (out.aborted) level.aborted = true;
    if (out.hit_cap || out.aborted) break;
  }
  return level;
}

// ---------------------------------------------------------------------------
// 2-D search over an N x h rectangle, points in row-major order.

class GridLevelSearch {
 public:
  GridLevelSearch(std::int64_t s, std::int64_t width, std::int64_t height, std::span<const std::int64_t> table,
                  Budget* budget)
      : s_(s),
        width_(width),
        height_(height),
        total_(width * height),
        table_(table),
        cap_(std::min(table[static_cast<std::size_t>(height - 1)] + width, width * height)),
        budget_(budget),
        chosen_bits_(static_cast<std::size_t>(total_), false) {
    best_ = std::max<std::int64_t>(table[static_cast<std::size_t>(height - 1)] - 1, 0);
  }

  LevelOutcome run() {
    dfs(0);
    LevelOutcome out;
    out.value = best_;
    out.nodes = nodes_;
    out.aborted = aborted_;
    out.set = std::move(best_set_);
    return out;
  }

 private:
  std::int64_t x_of(std::int64_t idx) const { return idx % width_ + 1; }
  std::int64_t y_of(std::int64_t idx) const { return idx / width_ + 1; }
  bool chosen(std::int64_t x, std::int64_t y) const {
    return chosen_bits_[static_cast<std::size_t>((y - 1) * width_ + (x - 1))];
  }

  // A point may join unless it would be the top-right corner of a grid whose
  // other points are all chosen; every other grid point precedes it.
  bool legal(std::int64_t idx) const {
    const std::int64_t x = x_of(idx);
    const std::int64_t y = y_of(idx);
    for (std::int64_t l = 1; x - (s_ - 1) * l >= 1 && y - (s_ - 1) * l >= 1; ++l) {
      bool complete = true;
      for (std::int64_t j = 0; j < s_ && complete; ++j) {
        for (std::int64_t i = 0; i < s_; ++i) {
          if ((i != 0 || j != 0) && !chosen(x - i * l, y - j * l)) {
            complete = false;
            break;
          }
        }
      }
      if (complete) return false;
    }
    return true;
  }

  std::int64_t upper_bound(std::int64_t idx) const {
    const std::int64_t row_left = width_ - x_of(idx) + 1;
    const std::int64_t rows_after = height_ - y_of(idx);
    return std::min(total_ - idx, row_left + table_[static_cast<std::size_t>(rows_after)]);
  }

  void dfs(std::int64_t pos) {
    if (budget_ && !budget_->spend()) {
      aborted_ = stop_ = true;
      return;
    }
    ++nodes_;
    const auto size = static_cast<std::int64_t>(chosen_list_.size());
    if (size > best_) {
      best_ = size;
      best_set_ = chosen_list_;
      if (size >= cap_) {
        stop_ = true;
        return;
      }
    }
    for (std::int64_t c = pos; c < total_ && !stop_; ++c) {
      if (size + upper_bound(c) <= best_) break;
      if (!legal(c)) continue;
      chosen_bits_[static_cast<std::size_t>(c)] = true;
      chosen_list_.push_back(c);
      dfs(c + 1);
      chosen_list_.pop_back();
      chosen_bits_[static_cast<std::size_t>(c)] = false;
    }
  }

  std::int64_t s_;
  std::int64_t width_;
  std::int64_t height_;
  std::int64_t total_;
  std::span<const std::int64_t> table_;
  std::int64_t cap_;
  Budget* budget_;
  std::vector<bool> chosen_bits_;
  std::vector<std::int64_t> chosen_list_;
  std::vector<std::int64_t> best_set_;
  std::int64_t best_ = 0;
  std::uint64_t nodes_ = 0;
  bool stop_ = false;
  bool aborted_ = false;
};

PointSet grid_points(std::span<const std::int64_t> indices, std::int64_t width) {
  std::vector<Point> pts;
  pts.reserve(indices.size());
  for (auto idx : indices) pts.push_back({idx % width + 1, idx / width + 1});
  return PointSet(std::move(pts));
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  unsigned cap = 0;
  if (const char* env = std::getenv("APFREE_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) cap = static_cast<unsigned>(std::min<unsigned long>(v, 1024));
  }
  unsigned n = requested;
  if (n == 0) n = cap != 0 ? cap : std::max(1U, std::thread::hardware_concurrency());
  if (cap != 0) n = std::min(n, cap);
  return n;
}

ApSearchResult max_ap_free(std::int64_t k, std::int64_t n, const SearchConfig& cfg) {
  if (k < 3) throw DomainError("progression length k must be at least 3, got " + std::to_string(k));
  if (n < 1) throw DomainError("n must be positive, got " + std::to_string(n));
  const auto started = Clock::now();
  const unsigned threads = cfg.node_budget ? 1 : resolve_threads(cfg.threads);
  Budget budget{cfg.node_budget};
  Budget* budget_ptr = cfg.node_budget ? &budget : nullptr;

  std::vector<std::int64_t> table{0};
  std::vector<std::int64_t> optimum;
  ApSearchResult result;
  for (std::int64_t m = 1; m <= n; ++m) {
    LevelOutcome level = search_level(k, m, table, threads, budget_ptr);
    result.nodes_explored += level.nodes;
    // A completed level's winner is the lexicographically smallest optimum for
    // this prefix; an aborted level only contributes a strictly larger set.
    if (!level.aborted || level.set.size() > optimum.size()) optimum = std::move(level.set);
    if (level.aborted) {
      result.exact = false;
      break;
    }
    table.push_back(level.value);
  }
  if (budget_ptr) result.nodes_explored = budget.used;

  result.value = static_cast<std::int64_t>(optimum.size());
  result.optimum = NaturalSet(std::move(optimum));
  if (find_ap(result.optimum, k)) throw std::logic_error("search produced a set containing a progression");
  result.elapsed = Clock::now() - started;
  return result;
}

GridSearchResult max_grid_free(std::int64_t s, std::int64_t n, const SearchConfig& cfg) {
  if (s < 2) throw DomainError("grid size s must be at least 2, got " + std::to_string(s));
  if (n < 1) throw DomainError("n must be positive, got " + std::to_string(n));
  const auto started = Clock::now();
  Budget budget{cfg.node_budget};
  Budget* budget_ptr = cfg.node_budget ? &budget : nullptr;

  // table[h]: extremal value on the n x h rectangle.
  std::vector<std::int64_t> table{0};
  std::vector<std::int64_t> optimum;
  GridSearchResult result;
  for (std::int64_t h = 1; h <= n; ++h) {
    LevelOutcome level = GridLevelSearch(s, n, h, table, budget_ptr).run();
    result.nodes_explored += level.nodes;
    if (!level.aborted || level.set.size() > optimum.size()) optimum = std::move(level.set);
    if (level.aborted) {
      result.exact = false;
      break;
    }
    table.push_back(level.value);
  }

  result.value = static_cast<std::int64_t>(optimum.size());
  result.optimum = grid_points(optimum, n);
  if (find_grid(result.optimum, s)) throw std::logic_error("search produced a set containing a grid");
  result.elapsed = Clock::now() - started;
  return result;
}

CertifiedBound certified_lower_bound(std::int64_t s, std::int64_t n, const SearchConfig& cfg) {
  if (s < 2) throw DomainError("grid size s must be at least 2, got " + std::to_string(s));
  CertifiedBound out;
  out.ap_free = max_ap_free(2 * s - 1, n, cfg);
  out.exact = out.ap_free.exact;
  out.bound = checked_mul(out.ap_free.value, n);
  out.certificate = theta(out.ap_free.optimum, n);
  if (find_grid(out.certificate, s)) throw std::logic_error("lifted certificate contains a grid");
  return out;
}

}  // namespace apfree
