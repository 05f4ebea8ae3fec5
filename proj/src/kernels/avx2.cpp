// Compiled with -mavx2 -mfma; only reached after a cpuid check.

#include <immintrin.h>

#include "qpv/kernels.hpp"

namespace qpv::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline void matvec_block(const double* m, std::size_t n, std::size_t stride, const double* x, double* y) {
  for (std::size_t i = 0; i < stride; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n; ++j) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(m + j * stride + i), _mm256_broadcast_sd(x + j), acc);
    }
    _mm256_storeu_pd(y + i, acc);
  }
}

void matvec(const double* m, std::size_t n, std::size_t stride, const double* x, double* y) {
  matvec_block(m, n, stride, x, y);
}

double horizontal_max(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  lo = _mm_max_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

double max_abs(const double* v, std::size_t len) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= len; i += kLanes) {
    best = _mm256_max_pd(best, _mm256_andnot_pd(sign, _mm256_loadu_pd(v + i)));
  }
  double r = horizontal_max(best);
  for (; i < len; ++i) {
    const double a = v[i] < 0.0 ? -v[i] : v[i];
    r = a > r ? a : r;
  }
  return r;
}

// x + h * k over stride entries (stride is a multiple of four).
inline void axpy_into(const double* x, double h, const double* k, double* out, std::size_t stride) {
  const __m256d vh = _mm256_set1_pd(h);
  for (std::size_t i = 0; i < stride; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vh, _mm256_loadu_pd(k + i), _mm256_loadu_pd(x + i)));
  }
}

double rk4_step(const double* m, std::size_t n, std::size_t stride, double dt, double* x, double* work) {
  double* k1 = work;
  double* k2 = work + stride;
  double* k3 = work + 2 * stride;
  double* k4 = work + 3 * stride;
  double* tmp = work + 4 * stride;

  matvec_block(m, n, stride, x, k1);
  axpy_into(x, 0.5 * dt, k1, tmp, stride);
  matvec_block(m, n, stride, tmp, k2);
  axpy_into(x, 0.5 * dt, k2, tmp, stride);
  matvec_block(m, n, stride, tmp, k3);
  axpy_into(x, dt, k3, tmp, stride);
  matvec_block(m, n, stride, tmp, k4);

  const __m256d sixth = _mm256_set1_pd(dt / 6.0);
  const __m256d two = _mm256_set1_pd(2.0);
  for (std::size_t i = 0; i < stride; i += kLanes) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_loadu_pd(k4 + i));
    s = _mm256_fmadd_pd(two, _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i)), s);
    _mm256_storeu_pd(x + i, _mm256_fmadd_pd(sixth, s, _mm256_loadu_pd(x + i)));
  }
  return max_abs(k1, stride);
}

constexpr KernelTable kAvx2{Backend::Avx2, "avx2", &matvec, &rk4_step, &max_abs};

}  // namespace

const KernelTable* avx2_table_impl() { return &kAvx2; }

}  // namespace qpv::kernels
