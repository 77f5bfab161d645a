#include "shallow/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace shallow::kernels {

bool avx2_available() {
#if defined(SHALLOW_NO_AVX2)
  return false;
#else
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#endif
}

#if defined(SHALLOW_NO_AVX2)
const Ops& avx2_ops() { return scalar_ops(); }
#endif

const Ops& active_ops() {
  static const Ops& ops = []() -> const Ops& {
    if (const char* env = std::getenv("SHALLOW_SAMPLER_SIMD")) {
      if (std::strcmp(env, "scalar") == 0) return scalar_ops();
      if (std::strcmp(env, "avx2") == 0 && avx2_available()) return avx2_ops();
    }
    return avx2_available() ? avx2_ops() : scalar_ops();
  }();
  return ops;
}

}  // namespace shallow::kernels
