#pragma once

// Data-parallel inner loops with a scalar reference and vector variants.
//
// The active variant is chosen once at startup from CPU features and can be
// overridden with APFREE_SIMD=scalar|avx2 or force_isa(). Every variant
// returns bit-identical results: the bitset kernels are exact, and the energy
// kernel uses the same four-lane compensated summation order in all variants.

#include <cstdint>
#include <span>
#include <string_view>

namespace apfree::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

/// The variant used by the dispatching entry points below.
Isa active_isa();

/// Throws DomainError if the CPU cannot run the requested variant.
void force_isa(Isa isa);

/// popcount(a & ~b) over equal-length word spans.
std::uint64_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Sum of 1 / (x_i^2 + y_i^2) with per-lane Neumaier compensation.
double inverse_square_norm_sum(std::span<const double> xs, std::span<const double> ys);

namespace scalar {
std::uint64_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double inverse_square_norm_sum(std::span<const double> xs, std::span<const double> ys);
}  // namespace scalar

namespace avx2 {
std::uint64_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double inverse_square_norm_sum(std::span<const double> xs, std::span<const double> ys);
}  // namespace avx2

}  // namespace apfree::kernels
