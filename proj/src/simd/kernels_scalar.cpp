#include "simd/kernels.hpp"

namespace lobe::simd {

namespace {

void real2x2_scalar(cplx* lo, cplx* hi, std::size_t n, double m00, double m01,
                    double m10, double m11) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = lo[i];
    const cplx b = hi[i];
    lo[i] = m00 * a + m01 * b;
    hi[i] = m10 * a + m11 * b;
  }
}

void swap_halves_scalar(cplx* lo, cplx* hi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx tmp = lo[i];
    lo[i] = hi[i];
    hi[i] = tmp;
  }
}

void scale_scalar(cplx* p, std::size_t n, cplx factor) {
  for (std::size_t i = 0; i < n; ++i) p[i] *= factor;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", &real2x2_scalar, &swap_halves_scalar,
                         &scale_scalar};
  return k;
}

}  // namespace lobe::simd
