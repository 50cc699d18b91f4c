#include "apfree/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "apfree/construct.hpp"
#include "apfree/io.hpp"
#include "apfree/kernels.hpp"

namespace apfree {

namespace {

struct Fraction {
  mpz_class num;
  mpz_class den;
};

// Unreduced sum of 1/den(i) for i in [lo, hi) by balanced pairwise addition.
template <typename DenFn>
Fraction unit_fraction_sum(std::size_t lo, std::size_t hi, const DenFn& den) {
  if (hi == lo) return {0, 1};
  if (hi - lo == 1) return {1, den(lo)};
  const std::size_t mid = lo + (hi - lo) / 2;
  Fraction left = unit_fraction_sum(lo, mid, den);
  Fraction right = unit_fraction_sum(mid, hi, den);
  return {left.num * right.den + right.num * left.den, left.den * right.den};
}

mpq_class reduce(Fraction f) {
  mpq_class q(f.num, f.den);
  q.canonicalize();
  return q;
}

mpz_class big(std::int64_t v) { return mpz_class(static_cast<long>(v)); }

mpz_class square_norm(std::int64_t x, std::int64_t y) {
  const mpz_class bx = big(x);
  const mpz_class by = big(y);
  return bx * bx + by * by;
}

Fraction row_fraction(std::int64_t a) {
  return unit_fraction_sum(0, static_cast<std::size_t>(a), [a](std::size_t i) {
    const auto m = static_cast<std::int64_t>(i) + 1;
    return square_norm(a + m, m);
  });
}

}  // namespace

void BoundParams::validate() const {
  if (k < 3) throw DomainError("k must be at least 3");
  if (n < 2) throw DomainError("bound needs N >= 2, got " + std::to_string(n));
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be a positive finite number");
}

mpq_class row_energy(std::int64_t a) {
  if (a < 1) throw DomainError("row index a must be positive");
  return reduce(row_fraction(a));
}

RowBoundCheck row_bound_check(std::int64_t a) {
  if (a < 1) throw DomainError("row index a must be positive");
  const Fraction f = row_fraction(a);
  // num/den >= 1/(5a)  <=>  5a * num >= den, all quantities positive.
  const mpz_class lhs = f.num * big(5) * big(a);
  const int cmp_result = cmp(lhs, f.den);
  return {cmp_result >= 0, cmp_result == 0};
}

bool check_row_bound(std::int64_t a) { return row_bound_check(a).holds; }

EnergyTotal energy_partial(const PointSet& b) {
  EnergyTotal total;
  total.points = b.size();
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(b.size());
  ys.reserve(b.size());
  for (const auto& p : b) {
    xs.push_back(static_cast<double>(p.x));
    ys.push_back(static_cast<double>(p.y));
  }
  total.approx = kernels::inverse_square_norm_sum(xs, ys);
  if (b.size() <= kExactEnergyLimit) {
    const auto& pts = b.points();
    total.exact = reduce(unit_fraction_sum(0, pts.size(), [&](std::size_t i) { return square_norm(pts[i].x, pts[i].y); }));
  }
  return total;
}

EnergyReport energy_report(const NaturalSet& a, std::int64_t rows) {
  EnergyReport report;
  report.total = energy_partial(theta(a, rows));
  for (auto v : a) {
    RowEnergy row{v, row_energy(v), mpq_class(1, 5 * static_cast<unsigned long>(v))};
    row.lower_bound.canonicalize();
    if (row.row_sum < row.lower_bound) {
      throw std::logic_error("row energy below 1/(5a) at a = " + std::to_string(v));
    }
    report.per_row.push_back(std::move(row));
  }
  return report;
}

mpq_class harmonic_partial(const NaturalSet& a) {
  const auto& el = a.elements();
  return reduce(unit_fraction_sum(0, el.size(), [&](std::size_t i) { return big(el[i]); }));
}

double behrend_bound(const BoundParams& p) {
  p.validate();
  const double n = static_cast<double>(p.n);
  return n * std::exp(-p.c * std::pow(std::log(n), 1.0 / static_cast<double>(p.k - 1)));
}

std::vector<GridBoundRow> grid_bound_table(std::int64_t s, std::span<const std::int64_t> ns, double c,
                                           const SearchConfig& cfg) {
  if (s < 2) throw DomainError("grid size s must be at least 2");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be a positive finite number");
  std::vector<GridBoundRow> rows;
  for (auto n : ns) {
    const CertifiedBound cert = certified_lower_bound(s, n, cfg);
    const double nd = static_cast<double>(n);
    rows.push_back({n, cert.ap_free.value, cert.exact, cert.bound,
                    nd * nd * std::exp(-c * std::pow(std::log(nd), 1.0 / static_cast<double>(2 * s - 2)))});
  }
  return rows;
}

std::string rational_string(const mpq_class& q) {
  mpq_class r(q);
  r.canonicalize();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

void write_grid_bound_csv(std::ostream& out, std::span<const GridBoundRow> rows) {
  out << "N,r,exact,lifted_bound,behrend_form\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.ap_free_max << ',' << (row.exact ? "true" : "false") << ',' << row.lifted_bound << ','
        << io::format_double(row.behrend_form) << '\n';
  }
}

}  // namespace apfree
