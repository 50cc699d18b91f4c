#include <array>
#include <cmath>

#include "apfree/kernels.hpp"

namespace apfree::kernels::scalar {

std::uint64_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & ~b[i]));
  return total;
}

double inverse_square_norm_sum(std::span<const double> xs, std::span<const double> ys) {
  // Element i feeds lane i % 4; this is the order the vector variants use.
  std::array<double, 4> sum{};
  std::array<double, 4> comp{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t lane = i % 4;
    const double v = 1.0 / (xs[i] * xs[i] + ys[i] * ys[i]);
    const double s = sum[lane];
    const double t = s + v;
    if (std::fabs(s) >= std::fabs(v)) {
      comp[lane] += (s - t) + v;
    } else {
      comp[lane] += (v - t) + s;
    }
    sum[lane] = t;
  }
  return ((sum[0] + sum[1]) + (sum[2] + sum[3])) + ((comp[0] + comp[1]) + (comp[2] + comp[3]));
}

}  // namespace apfree::kernels::scalar
