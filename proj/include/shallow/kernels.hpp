#pragma once

#include <complex>
#include <cstddef>

namespace shallow::kernels {

using cx = std::complex<double>;

// Data-parallel inner loops of the statevector engine. Each entry has a
// scalar reference implementation and (on x86-64) an AVX2 variant; the
// active table is chosen once at runtime from CPUID, overridable with
// SHALLOW_SAMPLER_SIMD=scalar|avx2.
struct Ops {
  // In-place 2x2 op on the qubit whose bit position (from LSB) is `bit`.
  // m is row-major: {m00, m01, m10, m11}.
  void (*apply_1q)(cx* amps, std::size_t len, unsigned bit, const cx m[4]);
  // sum of |a_i|^2
  double (*norm_sq)(const cx* amps, std::size_t len);
  // out[i] = |a_i|^2
  void (*abs_sq)(const cx* amps, double* out, std::size_t len);
  const char* name;
};

const Ops& scalar_ops();
bool avx2_available();
const Ops& avx2_ops();  // valid only if avx2_available()
const Ops& active_ops();

}  // namespace shallow::kernels
