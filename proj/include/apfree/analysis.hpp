#pragma once

// Exact checks of the energy inequality chain and the bound tables.
//
// Inequalities are decided with arbitrary-precision rationals only; doubles
// appear as reported approximations, never as evidence.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "apfree/core.hpp"
#include "apfree/search.hpp"

namespace apfree {

struct BoundParams {
  std::int64_t k = 3;
  std::int64_t n = 2;
  double c = 1.0;

  /// Throws DomainError unless k >= 3, n >= 2 and c > 0.
  void validate() const;
};

/// Exact totals are produced up to this many points.
inline constexpr std::size_t kExactEnergyLimit = 100000;

struct EnergyTotal {
  std::size_t points = 0;
  /// Compensated double-precision sum.
  double approx = 0.0;
  std::optional<mpq_class> exact;
};

struct RowEnergy {
  std::int64_t a = 0;
  mpq_class row_sum;
  mpq_class lower_bound;
};

struct EnergyReport {
  EnergyTotal total;
  std::vector<RowEnergy> per_row;
};

/// sum_{m=1}^{a} 1 / ((a+m)^2 + m^2).
mpq_class row_energy(std::int64_t a);

struct RowBoundCheck {
  bool holds = false;  // row_energy(a) >= 1/(5a)
  bool tight = false;  // row_energy(a) == 1/(5a)
};

/// Compares row_energy(a) with 1/(5a) by cross-multiplying an unreduced
/// product-tree sum, which avoids gcd reductions on large denominators.
RowBoundCheck row_bound_check(std::int64_t a);
bool check_row_bound(std::int64_t a);

/// sum over B of 1 / (x^2 + y^2).
EnergyTotal energy_partial(const PointSet& b);

/// Energy of theta(A, rows) with the per-row chain entries for each a in A.
/// Throws std::logic_error if any row_sum < lower_bound.
EnergyReport energy_report(const NaturalSet& a, std::int64_t rows);

/// sum over A of 1 / a.
mpq_class harmonic_partial(const NaturalSet& a);

/// n * exp(-c * (ln n)^(1/(k-1))).
double behrend_bound(const BoundParams& p);

struct GridBoundRow {
  std::int64_t n = 0;
  std::int64_t ap_free_max = 0;  // r(2s-1, n)
  bool exact = true;
  std::int64_t lifted_bound = 0;  // r(2s-1, n) * n
  double behrend_form = 0.0;      // n^2 * exp(-c * (ln n)^(1/(2s-2)))
};

std::vector<GridBoundRow> grid_bound_table(std::int64_t s, std::span<const std::int64_t> ns, double c,
                                           const SearchConfig& cfg = {});

/// Canonical "p/q"; integers keep the "/1".
std::string rational_string(const mpq_class& q);

void write_grid_bound_csv(std::ostream& out, std::span<const GridBoundRow> rows);

}  // namespace apfree
