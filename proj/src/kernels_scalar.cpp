#include "shallow/kernels.hpp"

namespace shallow::kernels {

namespace {

void apply_1q_scalar(cx* amps, std::size_t len, unsigned bit, const cx m[4]) {
  const std::size_t stride = std::size_t{1} << bit;
  for (std::size_t base = 0; base < len; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cx a0 = amps[i];
      const cx a1 = amps[i + stride];
      amps[i] = m[0] * a0 + m[1] * a1;
      amps[i + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

double norm_sq_scalar(const cx* amps, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += std::norm(amps[i]);
  return s;
}

void abs_sq_scalar(const cx* amps, double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = std::norm(amps[i]);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{apply_1q_scalar, norm_sq_scalar, abs_sq_scalar, "scalar"};
  return ops;
}

}  // namespace shallow::kernels
