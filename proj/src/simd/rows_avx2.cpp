// AVX2/FMA variant of the collision row kernel. Compiled with -mavx2 -mfma
// only for this translation unit; callers select it at runtime.

#include "vpb/simd/collision_row.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace vpb {

namespace {

// Gather-dot over the tensor stencil. Rows along z are contiguous, so each
// (a, b) line is one masked 4-double load; lanes beyond npts carry zero
// weight. Accumulation runs in 4 lanes and is reduced once at the end.
struct Avx2Ops {
  static double interp(const double* f, const InterpStencil& st, int n_axis) {
    const int stride_x = n_axis * n_axis;
    const __m256i mask =
        st.npts == 3 ? _mm256_set_epi64x(0, -1, -1, -1) : _mm256_set_epi64x(0, 0, -1, -1);
    const __m256d wz = _mm256_set_pd(0.0, st.wz[2], st.wz[1], st.wz[0]);
    __m256d acc = _mm256_setzero_pd();
    for (int a = 0; a < st.npts; ++a) {
      const double wxa = st.wx[a];
      const double* plane = f + st.base + a * stride_x;
      __m256d pacc = _mm256_setzero_pd();
      for (int b = 0; b < st.npts; ++b) {
        const __m256d row = _mm256_maskload_pd(plane + b * n_axis, mask);
        pacc = _mm256_fmadd_pd(row, _mm256_set1_pd(st.wy[b]), pacc);
      }
      acc = _mm256_fmadd_pd(pacc, _mm256_set1_pd(wxa), acc);
    }
    acc = _mm256_mul_pd(acc, wz);
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
  }
};

}  // namespace

RowOut collision_row_avx2(const CollisionTables& t, const double* FA, const double* FB, int i) {
  return collision_row<Avx2Ops>(t, FA, FB, i);
}

bool avx2_available() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

}  // namespace vpb

#else

namespace vpb {

RowOut collision_row_avx2(const CollisionTables& t, const double* FA, const double* FB, int i) {
  return collision_row_scalar(t, FA, FB, i);
}

bool avx2_available() { return false; }

}  // namespace vpb

#endif
