#pragma once

#include <cstdint>
#include <optional>

#include "apfree/core.hpp"

namespace apfree {

/// Lexicographically greedy k-AP-free subset of {1..n}: scan upwards, keep x
/// unless it completes a k-term progression with kept elements.
NaturalSet greedy_ap_free(std::int64_t k, std::int64_t n);

/// Digits 0..digit_bound-1 in `dimension` coordinates, restricted to the
/// squared-norm level `shell_norm`, encoded in base 2*digit_bound-1.
struct BehrendParams {
  std::int64_t digit_bound = 2;
  std::int64_t dimension = 1;
  std::int64_t shell_norm = 0;
  /// Number of digit vectors on the chosen shell (the output size).
  std::uint64_t shell_size = 0;

  std::int64_t base() const { return 2 * digit_bound - 1; }
  /// True iff shell_size > digit_bound^dimension / (dimension*(digit_bound-1)^2 + 1).
  bool beats_pigeonhole() const;

  friend bool operator==(const BehrendParams&, const BehrendParams&) = default;
};

/// Parameters used by behrend_set(n): the (digit_bound, dimension) pair with
/// base^dimension <= n whose most populous shell is largest, ties broken
/// toward larger dimension, then smaller digit_bound; the shell is the most
/// populous one, ties toward the smaller norm. Throws DomainError for n < 2.
BehrendParams choose_behrend_params(std::int64_t n);

/// 3-AP-free subset of {1..n} from a sphere shell of digit vectors.
NaturalSet behrend_set(std::int64_t n);
NaturalSet behrend_set(const BehrendParams& params);

/// {(a + m, m) : a in A, 1 <= m <= rows}, row-major order.
PointSet theta(const NaturalSet& a, std::int64_t rows);

/// A grid in theta(A, rows) forces the (2*size-1)-term progression of
/// diagonal offsets x - y through A.
ApWitness grid_to_ap(const GridWitness& w);

/// Places a (2s-1)-term progression as an s x s grid at the bottom of the
/// band; nullopt when 1 + (s-1)*diff exceeds rows.
std::optional<GridWitness> ap_to_grid(const ApWitness& w, std::int64_t rows);

}  // namespace apfree
