#include <immintrin.h>

#include <array>

#include "apfree/kernels.hpp"

namespace apfree::kernels::avx2 {

namespace {

// Per-byte popcount via nibble lookup, summed into four 64-bit lanes.
inline __m256i popcount_epi64(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1,
                                          2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

}  // namespace

std::uint64_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256i acc = _mm256_setzero_si256();
  for (; i + 4 <= n; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_andnot_si256(vb, va)));
  }
  alignas(32) std::array<std::uint64_t, 4> lanes;
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.data()), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & ~b[i]));
  return total;
}

double inverse_square_norm_sum(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  auto accumulate = [&](__m256d v) {
    const __m256d t = _mm256_add_pd(sum, v);
    const __m256d abs_s = _mm256_andnot_pd(sign_mask, sum);
    const __m256d abs_v = _mm256_andnot_pd(sign_mask, v);
    const __m256d s_big = _mm256_cmp_pd(abs_s, abs_v, _CMP_GE_OQ);
    const __m256d when_s_big = _mm256_add_pd(_mm256_sub_pd(sum, t), v);
    const __m256d when_v_big = _mm256_add_pd(_mm256_sub_pd(v, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(when_v_big, when_s_big, s_big));
    sum = t;
  };

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    const __m256d y = _mm256_loadu_pd(ys.data() + i);
    accumulate(_mm256_div_pd(one, _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y))));
  }
  if (i < n) {
    // Zero terms leave a lane's sum and compensation unchanged.
    alignas(32) std::array<double, 4> tail{};
    for (std::size_t lane = 0; i + lane < n; ++lane) {
      tail[lane] = 1.0 / (xs[i + lane] * xs[i + lane] + ys[i + lane] * ys[i + lane]);
    }
    accumulate(_mm256_load_pd(tail.data()));
  }

  alignas(32) std::array<double, 4> s;
  alignas(32) std::array<double, 4> c;
  _mm256_store_pd(s.data(), sum);
  _mm256_store_pd(c.data(), comp);
  return ((s[0] + s[1]) + (s[2] + s[3])) + ((c[0] + c[1]) + (c[2] + c[3]));
}

}  // namespace apfree::kernels::avx2
