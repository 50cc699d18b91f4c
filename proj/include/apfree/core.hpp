#pragma once

// Domain types for 1-D progression-free sets and 2-D grid-free point sets,
// together with the pattern detectors and witness verifiers.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace apfree {

/// Raised on invalid parameters or inputs that violate a type invariant.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Overflow-checked 64-bit helpers. Throw DomainError instead of wrapping.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// Strictly increasing finite sequence of positive integers.
class NaturalSet {
 public:
  NaturalSet() = default;

  /// Validates the invariants; throws DomainError on violation.
  explicit NaturalSet(std::vector<std::int64_t> elements);

  /// Sorts and deduplicates before validating positivity.
  static NaturalSet from_unsorted(std::vector<std::int64_t> elements);

  const std::vector<std::int64_t>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  std::int64_t max() const { return elements_.empty() ? 0 : elements_.back(); }
  bool contains(std::int64_t value) const;

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  friend bool operator==(const NaturalSet&, const NaturalSet&) = default;

 private:
  std::vector<std::int64_t> elements_;
};

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Canonical point order: by row (y) first, then by x.
struct RowMajorLess {
  bool operator()(const Point& a, const Point& b) const {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(p.y) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Finite set of lattice points with positive coordinates.
///
/// Points are held in row-major order (y, then x) so rows are contiguous,
/// with a hash index for membership queries.
class PointSet {
 public:
  PointSet() = default;

  /// Any input order is accepted; duplicates or non-positive coordinates
  /// throw DomainError.
  explicit PointSet(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool contains(Point p) const { return index_.contains(p); }

  /// Contiguous row slices of points(), in increasing y.
  struct Row {
    std::int64_t y;
    std::span<const Point> points;
  };
  std::vector<Row> rows() const;

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  friend bool operator==(const PointSet& a, const PointSet& b) { return a.points_ == b.points_; }

 private:
  std::vector<Point> points_;
  std::unordered_set<Point, PointHash> index_;
};

/// k-term progression certificate: start, start+diff, ..., start+(length-1)*diff.
struct ApWitness {
  std::int64_t start = 1;
  std::int64_t diff = 1;
  std::int64_t length = 3;

  /// Throws DomainError unless start, diff >= 1, length >= 3 and the last
  /// term is representable.
  void validate() const;
  std::int64_t term(std::int64_t i) const { return start + i * diff; }

  friend bool operator==(const ApWitness&, const ApWitness&) = default;
};

/// s x s grid certificate {(x0 + i*side, y0 + j*side) : 0 <= i, j < size}.
struct GridWitness {
  std::int64_t x0 = 1;
  std::int64_t y0 = 1;
  std::int64_t side = 1;
  std::int64_t size = 2;

  /// Throws DomainError unless coordinates and side are positive, size >= 2
  /// and the far corner is representable.
  void validate() const;
  Point point(std::int64_t i, std::int64_t j) const { return {x0 + i * side, y0 + j * side}; }

  friend bool operator==(const GridWitness&, const GridWitness&) = default;
};

/// Lexicographically smallest (start, diff) k-term progression inside A.
/// Throws DomainError for k < 3.
std::optional<ApWitness> find_ap(const NaturalSet& a, std::int64_t k);

/// Smallest (side, x0, y0) s x s equal-spacing grid inside B.
/// Throws DomainError for s < 2.
std::optional<GridWitness> find_grid(const PointSet& b, std::int64_t s);

bool verify_ap_witness(const NaturalSet& a, const ApWitness& w);
bool verify_grid_witness(const PointSet& b, const GridWitness& w);

}  // namespace apfree
