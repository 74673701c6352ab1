// NEON variants for aarch64. One complex double per 128-bit vector.

#include "simd/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace lobe::simd {

namespace {

void real2x2_neon(cplx* lo, cplx* hi, std::size_t n, double m00, double m01,
                  double m10, double m11) {
  double* plo = reinterpret_cast<double*>(lo);
  double* phi = reinterpret_cast<double*>(hi);
  const float64x2_t v00 = vdupq_n_f64(m00);
  const float64x2_t v01 = vdupq_n_f64(m01);
  const float64x2_t v10 = vdupq_n_f64(m10);
  const float64x2_t v11 = vdupq_n_f64(m11);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t a = vld1q_f64(plo + 2 * i);
    const float64x2_t b = vld1q_f64(phi + 2 * i);
    vst1q_f64(plo + 2 * i, vfmaq_f64(vmulq_f64(v01, b), v00, a));
    vst1q_f64(phi + 2 * i, vfmaq_f64(vmulq_f64(v11, b), v10, a));
  }
}

void swap_halves_neon(cplx* lo, cplx* hi, std::size_t n) {
  double* plo = reinterpret_cast<double*>(lo);
  double* phi = reinterpret_cast<double*>(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t a = vld1q_f64(plo + 2 * i);
    const float64x2_t b = vld1q_f64(phi + 2 * i);
    vst1q_f64(plo + 2 * i, b);
    vst1q_f64(phi + 2 * i, a);
  }
}

void scale_neon(cplx* p, std::size_t n, cplx factor) {
  double* pd = reinterpret_cast<double*>(p);
  const float64x2_t vre = vdupq_n_f64(factor.real());
  const double fi = factor.imag();
  const float64x2_t vim = {-fi, fi};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(pd + 2 * i);
    const float64x2_t sw = vextq_f64(v, v, 1);  // (im, re)
    vst1q_f64(pd + 2 * i, vfmaq_f64(vmulq_f64(sw, vim), v, vre));
  }
}

}  // namespace

const Kernels* neon_kernels() {
  static const Kernels k{"neon", &real2x2_neon, &swap_halves_neon, &scale_neon};
  return &k;
}

}  // namespace lobe::simd

#endif
