// Built with -mavx2 -mfma on x86-64. Nothing in here may be called unless
// avx2_table() returned non-null, which checks the running CPU first.

#include "leibniz/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#define LEIBNIZ_HAVE_AVX2 1
#include <immintrin.h>
#else
#define LEIBNIZ_HAVE_AVX2 0
#endif

namespace leibniz::kernels {

#if LEIBNIZ_HAVE_AVX2
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_abs_sum_avx2(const double* w, const double* x, double shift, std::size_t n) {
  const __m256d c = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), c));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - shift;
    s += w[i] * (d < 0.0 ? -d : d);
  }
  return s;
}

double weighted_sq_sum_avx2(const double* w, const double* x, double shift, std::size_t n) {
  const __m256d c = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), d), d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - shift;
    s += w[i] * d * d;
  }
  return s;
}

double max_abs_avx2(const double* x, double shift, std::size_t n) {
  const __m256d c = _mm256_set1_pd(shift);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), c)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = lanes[0];
  for (int k = 1; k < 4; ++k) r = lanes[k] > r ? lanes[k] : r;
  for (; i < n; ++i) {
    const double d = x[i] - shift;
    const double a = d < 0.0 ? -d : d;
    r = a > r ? a : r;
  }
  return r;
}

void matvec_avx2(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_avx2(a + i * n, x, n);
}

constexpr KernelTable kAvx2{
    "avx2",       dot_avx2,    weighted_abs_sum_avx2, weighted_sq_sum_avx2,
    max_abs_avx2, matvec_avx2,
};

}  // namespace

const KernelTable* avx2_table() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace leibniz::kernels
