// AVX2 variants of the statevector inner loops. This translation unit is
// compiled with -mavx2 -mfma; callers must gate on runtime CPU support.

#include "simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace lobe::simd {

namespace {

// Two complex doubles (4 doubles) per 256-bit vector.

void real2x2_avx2(cplx* lo, cplx* hi, std::size_t n, double m00, double m01,
                  double m10, double m11) {
  double* plo = reinterpret_cast<double*>(lo);
  double* phi = reinterpret_cast<double*>(hi);
  const __m256d v00 = _mm256_set1_pd(m00);
  const __m256d v01 = _mm256_set1_pd(m01);
  const __m256d v10 = _mm256_set1_pd(m10);
  const __m256d v11 = _mm256_set1_pd(m11);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(plo + 2 * i);
    const __m256d b = _mm256_loadu_pd(phi + 2 * i);
    _mm256_storeu_pd(plo + 2 * i, _mm256_fmadd_pd(v00, a, _mm256_mul_pd(v01, b)));
    _mm256_storeu_pd(phi + 2 * i, _mm256_fmadd_pd(v10, a, _mm256_mul_pd(v11, b)));
  }
  for (; i < n; ++i) {
    const cplx a = lo[i];
    const cplx b = hi[i];
    lo[i] = m00 * a + m01 * b;
    hi[i] = m10 * a + m11 * b;
  }
}

void swap_halves_avx2(cplx* lo, cplx* hi, std::size_t n) {
  double* plo = reinterpret_cast<double*>(lo);
  double* phi = reinterpret_cast<double*>(hi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(plo + 2 * i);
    const __m256d b = _mm256_loadu_pd(phi + 2 * i);
    _mm256_storeu_pd(plo + 2 * i, b);
    _mm256_storeu_pd(phi + 2 * i, a);
  }
  for (; i < n; ++i) {
    const cplx tmp = lo[i];
    lo[i] = hi[i];
    hi[i] = tmp;
  }
}

void scale_avx2(cplx* p, std::size_t n, cplx factor) {
  double* pd = reinterpret_cast<double*>(p);
  const double fr = factor.real();
  const double fi = factor.imag();
  const __m256d vre = _mm256_set1_pd(fr);
  const __m256d vim = _mm256_setr_pd(-fi, fi, -fi, fi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(pd + 2 * i);
    // (re,im)*(fr,fi) = (re*fr - im*fi, re*fi + im*fr)
    const __m256d sw = _mm256_permute_pd(v, 0x5);  // swap re/im pairs
    _mm256_storeu_pd(pd + 2 * i, _mm256_fmadd_pd(v, vre, _mm256_mul_pd(sw, vim)));
  }
  for (; i < n; ++i) p[i] *= factor;
}

}  // namespace

const Kernels* avx2_kernels() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma"))
    return nullptr;
  static const Kernels k{"avx2", &real2x2_avx2, &swap_halves_avx2, &scale_avx2};
  return &k;
}

}  // namespace lobe::simd

#else

namespace lobe::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace lobe::simd

#endif
