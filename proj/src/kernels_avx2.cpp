// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a CPUID check.
#include "nonrecip/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace nonrecip::kernels {

namespace {

// Two interleaved complex numbers per register: [re0, im0, re1, im1].
inline __m256d cmul_scalar(__m256d ar, __m256d ai, __m256d x) {
  __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xs));
}

inline __m256d cmul(__m256d v, __m256d x) {
  __m256d vr = _mm256_movedup_pd(v);
  __m256d vi = _mm256_permute_pd(v, 0xF);
  __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(vr, x, _mm256_mul_pd(vi, xs));
}

inline cplx hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(dp(x + i));
    __m256d yv = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(yv, cmul_scalar(ar, ai, xv)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled_avx2(const cplx* x, cplx alpha, const cplx* y, cplx* out, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(dp(x + i));
    __m256d yv = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(out + i), _mm256_add_pd(xv, cmul_scalar(ar, ai, yv)));
  }
  for (; i < n; ++i) out[i] = x[i] + alpha * y[i];
}

void spmv_avx2(const CsrView& a, const cplx* x, cplx* y) {
  const int* rp = a.row_ptr.data();
  const int* ci = a.col_idx.data();
  const cplx* val = a.values.data();
  for (std::size_t r = 0; r < a.rows; ++r) {
    int k = rp[r];
    const int end = rp[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 2 <= end; k += 2) {
      __m256d v = _mm256_loadu_pd(dp(val + k));
      __m256d xv = _mm256_set_m128d(_mm_loadu_pd(dp(x + ci[k + 1])), _mm_loadu_pd(dp(x + ci[k])));
      acc = _mm256_add_pd(acc, cmul(v, xv));
    }
    cplx s = hsum(acc);
    for (; k < end; ++k) s += val[k] * x[ci[k]];
    y[r] = s;
  }
}

cplx dot_avx2(const cplx* w, const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(dp(w + i)), _mm256_loadu_pd(dp(x + i))));
  cplx s = hsum(acc);
  for (; i < n; ++i) s += w[i] * x[i];
  return s;
}

double max_abs_avx2(const cplx* x, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(dp(x + i));
    __m256d sq = _mm256_mul_pd(v, v);
    // re^2 + im^2 in both lanes of each pair
    m = _mm256_max_pd(m, _mm256_hadd_pd(sq, sq));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double m2 = std::max({lanes[0], lanes[1], lanes[2], lanes[3]});
  for (; i < n; ++i) m2 = std::max(m2, std::norm(x[i]));
  return std::sqrt(m2);
}

constexpr KernelTable kAvx2{Isa::avx2, axpy_avx2, add_scaled_avx2, spmv_avx2, dot_avx2,
                            max_abs_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace nonrecip::kernels
