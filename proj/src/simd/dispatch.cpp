#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "simd/kernels.hpp"

namespace lobe::simd {

namespace {

const Kernels* select_auto() {
#if defined(__aarch64__)
  if (const Kernels* k = neon_kernels()) return k;
#endif
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

const Kernels* initial() {
  if (const char* env = std::getenv("LOBE_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    if (std::strcmp(env, "avx2") == 0) {
      if (const Kernels* k = avx2_kernels()) return k;
      return &scalar_kernels();
    }
  }
  return select_auto();
}

const Kernels*& current() {
  static const Kernels* k = initial();
  return k;
}

}  // namespace

const Kernels& active() { return *current(); }

void force(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    current() = &scalar_kernels();
  } else if (std::strcmp(name, "avx2") == 0) {
    const Kernels* k = avx2_kernels();
    if (!k) throw std::runtime_error("AVX2 kernels unavailable on this CPU");
    current() = k;
  } else if (std::strcmp(name, "auto") == 0) {
    current() = select_auto();
  } else {
    throw std::invalid_argument("unknown SIMD backend: " + std::string(name));
  }
}

}  // namespace lobe::simd
