#include "shallow/kernels.hpp"

#include <immintrin.h>

namespace shallow::kernels {

namespace {

// complex multiply of two packed pairs (re0 im0 re1 im1)
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d b_re = _mm256_movedup_pd(b);                     // br br
  __m256d b_im = _mm256_permute_pd(b, 0b1111);             // bi bi
  __m256d a_sw = _mm256_permute_pd(a, 0b0101);             // ai ar
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

void apply_1q_avx2(cx* amps, std::size_t len, unsigned bit, const cx m[4]) {
  const std::size_t stride = std::size_t{1} << bit;
  double* p = reinterpret_cast<double*>(amps);
  if (stride >= 2) {
    const __m256d m00 = _mm256_setr_pd(m[0].real(), m[0].imag(), m[0].real(), m[0].imag());
    const __m256d m01 = _mm256_setr_pd(m[1].real(), m[1].imag(), m[1].real(), m[1].imag());
    const __m256d m10 = _mm256_setr_pd(m[2].real(), m[2].imag(), m[2].real(), m[2].imag());
    const __m256d m11 = _mm256_setr_pd(m[3].real(), m[3].imag(), m[3].real(), m[3].imag());
    for (std::size_t base = 0; base < len; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; i += 2) {
        __m256d a0 = _mm256_loadu_pd(p + 2 * i);
        __m256d a1 = _mm256_loadu_pd(p + 2 * (i + stride));
        __m256d r0 = _mm256_add_pd(cmul(a0, m00), cmul(a1, m01));
        __m256d r1 = _mm256_add_pd(cmul(a0, m10), cmul(a1, m11));
        _mm256_storeu_pd(p + 2 * i, r0);
        _mm256_storeu_pd(p + 2 * (i + stride), r1);
      }
    }
  } else {
    // bit 0: amplitude pairs are adjacent; one register holds (a0, a1)
    const __m256d row0 = _mm256_setr_pd(m[0].real(), m[0].imag(), m[1].real(), m[1].imag());
    const __m256d row1 = _mm256_setr_pd(m[2].real(), m[2].imag(), m[3].real(), m[3].imag());
    for (std::size_t i = 0; i < len; i += 2) {
      __m256d a = _mm256_loadu_pd(p + 2 * i);  // a0 a1
      __m256d t0 = cmul(a, row0);              // m00*a0, m01*a1
      __m256d t1 = cmul(a, row1);              // m10*a0, m11*a1
      __m128d r0 = _mm_add_pd(_mm256_castpd256_pd128(t0), _mm256_extractf128_pd(t0, 1));
      __m128d r1 = _mm_add_pd(_mm256_castpd256_pd128(t1), _mm256_extractf128_pd(t1, 1));
      _mm_storeu_pd(p + 2 * i, r0);
      _mm_storeu_pd(p + 2 * i + 2, r1);
    }
  }
}

double norm_sq_avx2(const cx* amps, std::size_t len) {
  const double* p = reinterpret_cast<const double*>(amps);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d a = _mm256_loadu_pd(p + 2 * i);
    acc = _mm256_fmadd_pd(a, a, acc);
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s2 = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
  for (; i < len; ++i) s += std::norm(amps[i]);
  return s;
}

void abs_sq_avx2(const cx* amps, double* out, std::size_t len) {
  const double* p = reinterpret_cast<const double*>(amps);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d a = _mm256_loadu_pd(p + 2 * i);
    __m256d sq = _mm256_mul_pd(a, a);
    __m256d sw = _mm256_permute_pd(sq, 0b0101);
    __m256d sum = _mm256_add_pd(sq, sw);  // (n0 n0 n1 n1)
    __m128d r = _mm_unpacklo_pd(_mm256_castpd256_pd128(sum), _mm256_extractf128_pd(sum, 1));
    _mm_storeu_pd(out + i, r);
  }
  for (; i < len; ++i) out[i] = std::norm(amps[i]);
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{apply_1q_avx2, norm_sq_avx2, abs_sq_avx2, "avx2"};
  return ops;
}

}  // namespace shallow::kernels
