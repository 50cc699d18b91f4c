#include <atomic>
#include <cstdlib>
#include <string>

#include "apfree/core.hpp"
#include "apfree/kernels.hpp"

namespace apfree::kernels {

#if !defined(APFREE_HAVE_AVX2)
namespace avx2 {
// Not built for this architecture; isa_supported() keeps these unreachable.
std::uint64_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return scalar::andnot_popcount(a, b);
}
double inverse_square_norm_sum(std::span<const double> xs, std::span<const double> ys) {
  return scalar::inverse_square_norm_sum(xs, ys);
}
}  // namespace avx2
#endif

namespace {

Isa detect() {
  if (const char* env = std::getenv("APFREE_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
  }
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(APFREE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) throw DomainError("SIMD variant not supported on this CPU: " + std::string(isa_name(isa)));
  current().store(isa, std::memory_order_relaxed);
}

std::uint64_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active_isa() == Isa::avx2 ? avx2::andnot_popcount(a, b) : scalar::andnot_popcount(a, b);
}

double inverse_square_norm_sum(std::span<const double> xs, std::span<const double> ys) {
  return active_isa() == Isa::avx2 ? avx2::inverse_square_norm_sum(xs, ys) : scalar::inverse_square_norm_sum(xs, ys);
}

}  // namespace apfree::kernels
