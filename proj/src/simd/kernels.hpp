#pragma once

#include <complex>
#include <cstddef>

namespace lobe::simd {

using cplx = std::complex<double>;

/// Inner-loop kernels over contiguous runs of amplitudes. `lo` and `hi` are
/// the target-bit-0 and target-bit-1 halves of a gate application; both runs
/// hold `n` complex values.
struct Kernels {
  const char* name;
  // lo' = m00*lo + m01*hi ; hi' = m10*lo + m11*hi (real 2x2: Ry, H)
  void (*real2x2)(cplx* lo, cplx* hi, std::size_t n, double m00, double m01,
                  double m10, double m11);
  // swap lo <-> hi (X)
  void (*swap_halves)(cplx* lo, cplx* hi, std::size_t n);
  // p[i] *= factor (phase gates)
  void (*scale)(cplx* p, std::size_t n, cplx factor);
};

const Kernels& scalar_kernels();

/// Returns null when AVX2 kernels are not compiled in or the CPU lacks AVX2.
const Kernels* avx2_kernels();

#if defined(__aarch64__)
const Kernels* neon_kernels();
#endif

/// Active kernel set. Selection: LOBE_SIMD=scalar|avx2|auto (default auto).
const Kernels& active();

/// Force a backend by name ("scalar", "avx2", "auto"); throws on unknown or
/// unavailable backends.
void force(const char* name);

}  // namespace lobe::simd
