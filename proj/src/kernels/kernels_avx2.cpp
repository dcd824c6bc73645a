// AVX2 variants of the evaluator kernels. Compiled with -mavx2 in its own
// translation unit; callers must check simd_available() before dispatching.

#include "mubforge/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace mubforge::kernels {

namespace {

void cdot16_avx2(const double* are, const double* aim, const double* bre, const double* bim,
                 double* zr, double* zi) {
  __m256d sr = _mm256_setzero_pd();
  __m256d si = _mm256_setzero_pd();
  for (int k = 0; k < kMaxDim; k += 4) {
    const __m256d ar = _mm256_load_pd(are + k);
    const __m256d ai = _mm256_load_pd(aim + k);
    const __m256d br = _mm256_load_pd(bre + k);
    const __m256d bi = _mm256_load_pd(bim + k);
    sr = _mm256_add_pd(sr, _mm256_add_pd(_mm256_mul_pd(ar, br), _mm256_mul_pd(ai, bi)));
    si = _mm256_add_pd(si, _mm256_sub_pd(_mm256_mul_pd(ar, bi), _mm256_mul_pd(ai, br)));
  }
  // horizontal sums
  const __m128d sr2 = _mm_add_pd(_mm256_castpd256_pd128(sr), _mm256_extractf128_pd(sr, 1));
  const __m128d si2 = _mm_add_pd(_mm256_castpd256_pd128(si), _mm256_extractf128_pd(si, 1));
  *zr = _mm_cvtsd_f64(_mm_add_pd(sr2, _mm_unpackhi_pd(sr2, sr2)));
  *zi = _mm_cvtsd_f64(_mm_add_pd(si2, _mm_unpackhi_pd(si2, si2)));
}

void outer_acc_avx2(double* a, int stride, const double* x, int nx, const double* y, int ny) {
  const int ny4 = ny & ~3;
  for (int i = 0; i < nx; ++i) {
    double* row = a + static_cast<long>(i) * stride;
    const __m256d xi = _mm256_set1_pd(x[i]);
    int j = 0;
    for (; j < ny4; j += 4) {
      const __m256d r = _mm256_loadu_pd(row + j);
      _mm256_storeu_pd(row + j, _mm256_add_pd(r, _mm256_mul_pd(xi, _mm256_loadu_pd(y + j))));
    }
    for (; j < ny; ++j) row[j] += x[i] * y[j];
  }
}

}  // namespace

const Ops* avx2_ops_or_null() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  static const Ops ops{"avx2", cdot16_avx2, outer_acc_avx2};
  return &ops;
}

}  // namespace mubforge::kernels

#else

namespace mubforge::kernels {
const Ops* avx2_ops_or_null() { return nullptr; }
}  // namespace mubforge::kernels

#endif
