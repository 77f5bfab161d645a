#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <vector>

namespace shallow {

using cx = std::complex<double>;

// Dense square complex matrix, row-major. Dimensions stay tiny here
// (gates act on at most 6 qubits), so everything is done naively.
class CMat {
 public:
  CMat() = default;
  explicit CMat(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

  static CMat identity(int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }

  int dim() const { return dim_; }
  cx& at(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const cx& at(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const std::vector<cx>& data() const { return a_; }

 private:
  int dim_ = 0;
  std::vector<cx> a_;
};

inline CMat operator*(const CMat& a, const CMat& b) {
  assert(a.dim() == b.dim());
  const int d = a.dim();
  CMat out(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const cx aik = a.at(i, k);
      if (aik == cx{}) continue;
      for (int j = 0; j < d; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

inline CMat operator-(const CMat& a, const CMat& b) {
  assert(a.dim() == b.dim());
  CMat out(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out.at(i, j) = a.at(i, j) - b.at(i, j);
  return out;
}

inline CMat adjoint(const CMat& m) {
  CMat out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out.at(i, j) = std::conj(m.at(j, i));
  return out;
}

inline CMat kron(const CMat& a, const CMat& b) {
  const int da = a.dim(), db = b.dim();
  CMat out(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      const cx v = a.at(i, j);
      if (v == cx{}) continue;
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) out.at(i * db + k, j * db + l) = v * b.at(k, l);
    }
  return out;
}

inline double max_abs(const CMat& m) {
  double r = 0.0;
  for (const cx& v : m.data()) r = std::max(r, std::abs(v));
  return r;
}

inline double frobenius_norm(const CMat& m) {
  double s = 0.0;
  for (const cx& v : m.data()) s += std::norm(v);
  return std::sqrt(s);
}

inline double deviation_from_unitary(const CMat& m) {
  return max_abs(adjoint(m) * m - CMat::identity(m.dim()));
}

// Largest singular value via power iteration on M†M. The matrices this is
// used on are well separated from degeneracy, so a fixed iteration budget
// with one deterministic restart is plenty.
inline double operator_norm(const CMat& m) {
  const int d = m.dim();
  const CMat g = adjoint(m) * m;
  std::vector<cx> v(d);
  for (int i = 0; i < d; ++i) v[i] = cx(1.0 + i * 0.3, 0.25 * ((i * 7) % 5));
  double lambda = 0.0;
  for (int it = 0; it < 400; ++it) {
    std::vector<cx> w(d);
    for (int i = 0; i < d; ++i) {
      cx s{};
      for (int j = 0; j < d; ++j) s += g.at(i, j) * v[j];
      w[i] = s;
    }
    double nn = 0.0;
    for (const cx& x : w) nn += std::norm(x);
    nn = std::sqrt(nn);
    if (nn == 0.0) return 0.0;
    for (cx& x : w) x /= nn;
    lambda = nn;
    v = std::move(w);
  }
  return std::sqrt(lambda);
}

// min over global phases e^{i phi} of ||e^{i phi} a - b||_max
inline double phase_invariant_distance(const CMat& a, const CMat& b) {
  assert(a.dim() == b.dim());
  // align on the largest entry of b
  int br = 0, bc = 0;
  double best = -1.0;
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      if (std::abs(b.at(i, j)) > best) { best = std::abs(b.at(i, j)); br = i; bc = j; }
  cx phase(1.0, 0.0);
  if (std::abs(a.at(br, bc)) > 1e-300) phase = b.at(br, bc) / a.at(br, bc);
  if (std::abs(phase) > 1e-300) phase /= std::abs(phase);
  double r = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r = std::max(r, std::abs(phase * a.at(i, j) - b.at(i, j)));
  return r;
}

}  // namespace shallow
