#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <tuple>

#include "apfree/construct.hpp"
#include "apfree/core.hpp"

using namespace apfree;

namespace {

// Brute force: every k-subset of A, tested for constant gaps. Returns the
// lexicographically smallest (start, diff) found.
std::optional<std::pair<std::int64_t, std::int64_t>> brute_ap(const std::vector<std::int64_t>& a, int k) {
  std::optional<std::pair<std::int64_t, std::int64_t>> best;
  const int n = static_cast<int>(a.size());
  if (n < k) return best;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    const std::int64_t d = a[static_cast<std::size_t>(idx[1])] - a[static_cast<std::size_t>(idx[0])];
    bool ok = true;
    for (int i = 2; i < k && ok; ++i) {
      ok = a[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] -
               a[static_cast<std::size_t>(idx[static_cast<std::size_t>(i - 1)])] ==
           d;
    }
    if (ok) {
      std::pair<std::int64_t, std::int64_t> cand{a[static_cast<std::size_t>(idx[0])], d};
      if (!best || cand < *best) best = cand;
    }
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

// Brute force over every (side, x0, y0) inside the bounding box.
std::optional<GridWitness> brute_grid(const PointSet& b, std::int64_t s) {
  std::int64_t max_x = 0;
  std::int64_t max_y = 0;
  for (const auto& p : b) {
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  for (std::int64_t side = 1; side <= std::max(max_x, max_y); ++side) {
    for (std::int64_t x0 = 1; x0 + (s - 1) * side <= max_x; ++x0) {
      for (std::int64_t y0 = 1; y0 + (s - 1) * side <= max_y; ++y0) {
        bool all = true;
        for (std::int64_t i = 0; i < s && all; ++i) {
          for (std::int64_t j = 0; j < s && all; ++j) all = b.contains({x0 + i * side, y0 + j * side});
        }
        if (all) return GridWitness{x0, y0, side, s};
      }
    }
  }
  return std::nullopt;
}

PointSet random_points(std::mt19937_64& rng, std::int64_t box, std::size_t max_count) {
  std::vector<Point> all;
  for (std::int64_t y = 1; y <= box; ++y) {
    for (std::int64_t x = 1; x <= box; ++x) all.push_back({x, y});
  }
  std::shuffle(all.begin(), all.end(), rng);
  const std::size_t count = std::uniform_int_distribution<std::size_t>(0, max_count)(rng);
  all.resize(count);
  return PointSet(all);
}

}  // namespace

TEST_CASE("NaturalSet enforces strictly increasing positive elements") {
  CHECK_NOTHROW(NaturalSet({1, 2, 5}));
  CHECK_THROWS_AS(NaturalSet({0, 1}), DomainError);
  CHECK_THROWS_AS(NaturalSet({2, 2}), DomainError);
  CHECK_THROWS_AS(NaturalSet({3, 1}), DomainError);
  CHECK(NaturalSet::from_unsorted({5, 1, 5, 3}).elements() == std::vector<std::int64_t>{1, 3, 5});
}

TEST_CASE("PointSet rejects duplicates and non-positive coordinates, orders by row") {
  CHECK_THROWS_AS(PointSet({{1, 1}, {1, 1}}), DomainError);
  CHECK_THROWS_AS(PointSet({{0, 1}}), DomainError);
  const PointSet b({{3, 2}, {1, 2}, {5, 1}});
  REQUIRE(b.size() == 3);
  CHECK(b.points()[0] == Point{5, 1});
  CHECK(b.points()[1] == Point{1, 2});
  CHECK(b.contains({3, 2}));
  CHECK_FALSE(b.contains({2, 3}));
  const auto rows = b.rows();
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].points.size() == 2);
}

TEST_CASE("find_ap examples") {
  auto w = find_ap(NaturalSet({1, 2, 3}), 3);
  REQUIRE(w);
  CHECK(*w == ApWitness{1, 1, 3});
  CHECK_FALSE(find_ap(NaturalSet({1, 2, 4, 5}), 3));
  CHECK_FALSE(find_ap(NaturalSet({1, 2, 4, 8, 9, 13}), 3));
  w = find_ap(NaturalSet({2, 5, 8, 11, 14}), 5);
  REQUIRE(w);
  CHECK(*w == ApWitness{2, 3, 5});
  CHECK_FALSE(find_ap(NaturalSet({1, 2}), 3));
  CHECK_FALSE(find_ap(NaturalSet(), 3));
  CHECK_THROWS_AS(find_ap(NaturalSet({1, 2, 3}), 2), DomainError);
}

TEST_CASE("find_ap prefers the smallest start, then the smallest difference") {
  // 1,3,5 and 2,3,4 and 1,5,9: start 1 wins, diff 2 beats diff 4.
  auto w = find_ap(NaturalSet({1, 2, 3, 4, 5, 9}), 3);
  REQUIRE(w);
  CHECK(*w == ApWitness{1, 1, 3});
  w = find_ap(NaturalSet({1, 3, 5, 9, 10, 11}), 3);
  REQUIRE(w);
  CHECK(*w == ApWitness{1, 2, 3});
}

TEST_CASE("find_ap does not wrap around near the 64-bit limit") {
  const std::int64_t top = std::numeric_limits<std::int64_t>::max();
  CHECK(find_ap(NaturalSet({1, top / 2 + 1, top}), 3) == ApWitness{1, top / 2, 3});
  // The continuation 1 + 2 * (2^62) is not representable.
  CHECK_FALSE(find_ap(NaturalSet({1, top / 2 + 2, top}), 3));
  auto w = find_ap(NaturalSet({top - 2, top - 1, top}), 3);
  REQUIRE(w);
  CHECK(w->start == top - 2);
}

TEST_CASE("find_grid examples") {
  auto w = find_grid(PointSet({{1, 1}, {1, 2}, {2, 1}, {2, 2}}), 2);
  REQUIRE(w);
  CHECK(*w == GridWitness{1, 1, 1, 2});
  CHECK_FALSE(find_grid(PointSet({{1, 1}, {3, 1}, {1, 3}, {3, 4}}), 2));

  const PointSet band = theta(NaturalSet({1, 2, 4, 5}), 5);
  CHECK_FALSE(brute_grid(band, 2));
  CHECK_FALSE(find_grid(band, 2));
  CHECK_THROWS_AS(find_grid(band, 1), DomainError);
  CHECK_FALSE(find_grid(PointSet({{1, 1}, {2, 1}, {1, 2}}), 2));
}

TEST_CASE("find_grid prefers the smallest side, then x0, then y0") {
  // Side-2 square at (1,1) and side-1 square at (5,5).
  const PointSet b({{1, 1}, {3, 1}, {1, 3}, {3, 3}, {5, 5}, {6, 5}, {5, 6}, {6, 6}});
  auto w = find_grid(b, 2);
  REQUIRE(w);
  CHECK(*w == GridWitness{5, 5, 1, 2});
  // Two unit squares: (2,1) and (1,3); x0 decides.
  const PointSet c({{2, 1}, {3, 1}, {2, 2}, {3, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}});
  w = find_grid(c, 2);
  REQUIRE(w);
  CHECK(*w == GridWitness{1, 3, 1, 2});
}

TEST_CASE("verify witness examples") {
  CHECK(verify_ap_witness(NaturalSet({1, 3, 5}), {1, 2, 3}));
  CHECK_FALSE(verify_ap_witness(NaturalSet({1, 3, 6}), {1, 2, 3}));
  CHECK(verify_ap_witness(NaturalSet({1, 2, 3, 4, 5}), {1, 1, 5}));
  CHECK(verify_grid_witness(PointSet({{2, 1}, {2, 3}, {4, 1}, {4, 3}}), {2, 1, 2, 2}));
  CHECK_FALSE(verify_grid_witness(PointSet({{2, 1}, {2, 3}, {4, 1}}), {2, 1, 2, 2}));
  CHECK_FALSE(verify_grid_witness(PointSet({{2, 2}, {1, 2}, {2, 1}}), {1, 1, 1, 2}));
  const std::int64_t top = std::numeric_limits<std::int64_t>::max();
  CHECK_FALSE(verify_ap_witness(NaturalSet({top}), {top, top, 3}));
}

TEST_CASE("witness validation rejects overflow and degenerate shapes") {
  const std::int64_t top = std::numeric_limits<std::int64_t>::max();
  CHECK_THROWS_AS((GridWitness{top - 1, 1, 1, 3}.validate()), DomainError);
  CHECK_THROWS_AS((GridWitness{1, 1, 1, 1}.validate()), DomainError);
  CHECK_THROWS_AS((ApWitness{1, 1, 2}.validate()), DomainError);
  CHECK_THROWS_AS((ApWitness{top, 1, 3}.validate()), DomainError);
  CHECK_NOTHROW((ApWitness{top - 2, 1, 3}.validate()));
}

TEST_CASE("find_ap agrees with k-subset enumeration on every subset of {1..12}") {
  for (std::uint32_t mask = 0; mask < (1U << 12); ++mask) {
    std::vector<std::int64_t> a;
    for (int v = 1; v <= 12; ++v) {
      if (mask & (1U << (v - 1))) a.push_back(v);
    }
    const NaturalSet set(a);
    for (int k = 3; k <= 5; ++k) {
      const auto expected = brute_ap(a, k);
      const auto got = find_ap(set, k);
      REQUIRE(got.has_value() == expected.has_value());
      if (got) {
        CHECK(got->start == expected->first);
        CHECK(got->diff == expected->second);
        CHECK(got->length == k);
        CHECK(verify_ap_witness(set, *got));
      }
    }
  }
}

TEST_CASE("find_grid agrees with exhaustive corner enumeration on random small sets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    const PointSet b = random_points(rng, 5, 12);
    const auto expected = brute_grid(b, 2);
    const auto got = find_grid(b, 2);
    REQUIRE(got.has_value() == expected.has_value());
    if (got) {
      CHECK(std::tie(got->side, got->x0, got->y0) == std::tie(expected->side, expected->x0, expected->y0));
      CHECK(verify_grid_witness(b, *got));
    }
  }
  for (int trial = 0; trial < 500; ++trial) {
    const PointSet b = random_points(rng, 7, 40);
    const auto expected = brute_grid(b, 3);
    const auto got = find_grid(b, 3);
    REQUIRE(got.has_value() == expected.has_value());
    if (got) CHECK(std::tie(got->side, got->x0, got->y0) == std::tie(expected->side, expected->x0, expected->y0));
  }
}

TEST_CASE("detectors are monotone under taking subsets") {
  std::mt19937_64 rng(11);
  const NaturalSet free3 = greedy_ap_free(3, 300);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> sub;
    for (auto v : free3) {
      if (rng() % 2) sub.push_back(v);
    }
    CHECK_FALSE(find_ap(NaturalSet(sub), 3));
  }
  const PointSet band = theta(NaturalSet({1, 2, 4, 5, 10, 11, 13, 14}), 20);
  REQUIRE_FALSE(find_grid(band, 2));
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> sub;
    for (const auto& p : band) {
      if (rng() % 3) sub.push_back(p);
    }
    CHECK_FALSE(find_grid(PointSet(sub), 2));
  }
}

TEST_CASE("detectors are translation invariant") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::int64_t> a;
    for (int v = 1; v <= 30; ++v) {
      if (rng() % 3 == 0) a.push_back(v);
    }
    const std::int64_t t = static_cast<std::int64_t>(rng() % 1000);
    std::vector<std::int64_t> shifted(a);
    for (auto& v : shifted) v += t;
    const auto w = find_ap(NaturalSet(a), 3);
    const auto ws = find_ap(NaturalSet(shifted), 3);
    REQUIRE(w.has_value() == ws.has_value());
    if (w) CHECK(*ws == ApWitness{w->start + t, w->diff, 3});

    const PointSet b = random_points(rng, 6, 16);
    const std::int64_t tx = static_cast<std::int64_t>(rng() % 50);
    const std::int64_t ty = static_cast<std::int64_t>(rng() % 50);
    std::vector<Point> moved;
    for (const auto& p : b) moved.push_back({p.x + tx, p.y + ty});
    const auto g = find_grid(b, 2);
    const auto gs = find_grid(PointSet(moved), 2);
    REQUIRE(g.has_value() == gs.has_value());
    if (g) CHECK(*gs == GridWitness{g->x0 + tx, g->y0 + ty, g->side, 2});
  }
}
