#include "apfree/core.hpp"

#include <algorithm>
#include <limits>

namespace apfree {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw DomainError("64-bit overflow in addition");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("64-bit overflow in multiplication");
  return r;
}

namespace {

// a + i*step without throwing; nullopt when it leaves int64.
std::optional<std::int64_t> offset(std::int64_t a, std::int64_t i, std::int64_t step) {
  std::int64_t prod, r;
  if (__builtin_mul_overflow(i, step, &prod) || __builtin_add_overflow(a, prod, &r)) return std::nullopt;
  return r;
}

// Membership index over a NaturalSet: a dense bitmap when the range is small
// relative to the set, otherwise a hash set.
class MembershipIndex {
 public:
  explicit MembershipIndex(const NaturalSet& a) : max_(a.max()) {
    constexpr std::int64_t kDenseLimit = std::int64_t{1} << 26;
    if (max_ <= kDenseLimit || max_ <= 64 * static_cast<std::int64_t>(a.size())) {
      dense_.assign(static_cast<std::size_t>(max_) + 1, false);
      for (auto v : a) dense_[static_cast<std::size_t>(v)] = true;
      use_dense_ = true;
    } else {
      sparse_.reserve(a.size() * 2);
      sparse_.insert(a.begin(), a.end());
    }
  }

  bool contains(std::int64_t v) const {
    if (v < 1 || v > max_) return false;
    return use_dense_ ? dense_[static_cast<std::size_t>(v)] : sparse_.contains(v);
  }

 private:
  std::int64_t max_;
  bool use_dense_ = false;
  std::vector<bool> dense_;
  std::unordered_set<std::int64_t> sparse_;
};

}  // namespace

NaturalSet::NaturalSet(std::vector<std::int64_t> elements) : elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] < 1) throw DomainError("set elements must be positive, got " + std::to_string(elements_[i]));
    if (i > 0 && elements_[i] <= elements_[i - 1]) {
      throw DomainError("set elements must be strictly increasing at position " + std::to_string(i));
    }
  }
}

NaturalSet NaturalSet::from_unsorted(std::vector<std::int64_t> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return NaturalSet(std::move(elements));
}

bool NaturalSet::contains(std::int64_t value) const {
  return std::binary_search(elements_.begin(), elements_.end(), value);
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end(), RowMajorLess{});
  index_.reserve(points_.size() * 2);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    if (p.x < 1 || p.y < 1) {
      throw DomainError("point coordinates must be positive, got (" + std::to_string(p.x) + "," +
                        std::to_string(p.y) + ")");
    }
    if (i > 0 && points_[i - 1] == p) {
      throw DomainError("duplicate point (" + std::to_string(p.x) + "," + std::to_string(p.y) + ")");
    }
    index_.insert(p);
  }
}

std::vector<PointSet::Row> PointSet::rows() const {
  std::vector<Row> out;
  std::size_t begin = 0;
  while (begin < points_.size()) {
    std::size_t end = begin;
    while (end < points_.size() && points_[end].y == points_[begin].y) ++end;
    out.push_back({points_[begin].y, std::span<const Point>(points_).subspan(begin, end - begin)});
    begin = end;
  }
  return out;
}

void ApWitness::validate() const {
  if (start < 1 || diff < 1) throw DomainError("progression start and difference must be positive");
  if (length < 3) throw DomainError("progression length must be at least 3");
  if (!offset(start, length - 1, diff)) throw DomainError("progression terms overflow 64 bits");
}

void GridWitness::validate() const {
  if (x0 < 1 || y0 < 1 || side < 1) throw DomainError("grid corner and side must be positive");
  if (size < 2) throw DomainError("grid size must be at least 2");
  if (!offset(x0, size - 1, side) || !offset(y0, size - 1, side)) {
    throw DomainError("grid coordinates overflow 64 bits");
  }
}

std::optional<ApWitness> find_ap(const NaturalSet& a, std::int64_t k) {
  if (k < 3) throw DomainError("progression length k must be at least 3, got " + std::to_string(k));
  if (a.size() < static_cast<std::size_t>(k)) return std::nullopt;

  const MembershipIndex index(a);
  const auto& el = a.elements();
  const std::int64_t top = a.max();
  // Scanning starts ascending, then differences ascending, yields the
  // lexicographically smallest (start, diff) first.
  for (std::size_t i = 0; i < el.size(); ++i) {
    const std::int64_t start = el[i];
    for (std::size_t j = i + 1; j < el.size(); ++j) {
      const std::int64_t diff = el[j] - start;
      auto last = offset(start, k - 1, diff);
      if (!last || *last > top) break;
      bool all = true;
      for (std::int64_t t = 2; t < k; ++t) {
        if (!index.contains(start + t * diff)) {
          all = false;
          break;
        }
      }
      if (all) return ApWitness{start, diff, k};
    }
  }
  return std::nullopt;
}

std::optional<GridWitness> find_grid(const PointSet& b, std::int64_t s) {
  if (s < 2) throw DomainError("grid size s must be at least 2, got " + std::to_string(s));
  if (b.size() < static_cast<std::size_t>(s) * static_cast<std::size_t>(s)) return std::nullopt;

  std::optional<GridWitness> best;
  auto better = [&](std::int64_t side, std::int64_t x0, std::int64_t y0) {
    if (!best) return true;
    if (side != best->side) return side < best->side;
    if (x0 != best->x0) return x0 < best->x0;
    return y0 < best->y0;
  };

  // Every grid has its bottom-left corner and right neighbour in the same
  // row, so anchoring at same-row pairs enumerates all candidates.
  for (const auto& row : b.rows()) {
    const auto pts = row.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point corner = pts[i];
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const std::int64_t side = pts[j].x - corner.x;
        if (best && side > best->side) break;
        if (!better(side, corner.x, corner.y)) continue;
        auto far_x = offset(corner.x, s - 1, side);
        auto far_y = offset(corner.y, s - 1, side);
        if (!far_x || !far_y) break;
        // Cheapest rejection first: the opposite corner.
        if (!b.contains({*far_x, *far_y})) continue;
        bool all = true;
        for (std::int64_t gy = 0; gy < s && all; ++gy) {
          for (std::int64_t gx = 0; gx < s; ++gx) {
            if (!b.contains({corner.x + gx * side, corner.y + gy * side})) {
              all = false;
              break;
            }
          }
        }
        if (all) best = GridWitness{corner.x, corner.y, side, s};
      }
    }
  }
  return best;
}

bool verify_ap_witness(const NaturalSet& a, const ApWitness& w) {
  if (w.length < 1) return false;
  for (std::int64_t i = 0; i < w.length; ++i) {
    auto t = offset(w.start, i, w.diff);
    if (!t || !a.contains(*t)) return false;
  }
  return true;
}

bool verify_grid_witness(const PointSet& b, const GridWitness& w) {
  if (w.size < 1) return false;
  for (std::int64_t j = 0; j < w.size; ++j) {
    auto y = offset(w.y0, j, w.side);
    if (!y) return false;
    for (std::int64_t i = 0; i < w.size; ++i) {
      auto x = offset(w.x0, i, w.side);
      if (!x || !b.contains({*x, *y})) return false;
    }
  }
  return true;
}

}  // namespace apfree
