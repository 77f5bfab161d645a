#include "shallow/statevector.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "shallow/kernels.hpp"

namespace shallow {

namespace {

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("qubit count out of range [1, 24]");
}

}  // namespace

StateVector zero_state(int n_qubits) { return basis_state(n_qubits, 0); }

StateVector basis_state(int n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits);
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(std::size_t{1} << n_qubits, cx{});
  s.amplitudes.at(index) = 1.0;
  return s;
}

StateVector ghz_state(int n_qubits) {
  check_qubit_count(n_qubits);
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(std::size_t{1} << n_qubits, cx{});
  const double a = 1.0 / std::sqrt(2.0);
  s.amplitudes.front() = a;
  s.amplitudes.back() = a;
  return s;
}

StateVector random_state(int n_qubits, std::uint64_t seed) {
  check_qubit_count(n_qubits);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes.resize(std::size_t{1} << n_qubits);
  for (cx& a : s.amplitudes) a = cx(g(rng), g(rng));
  double n = state_norm(s);
  for (cx& a : s.amplitudes) a /= n;
  return s;
}

LinearOp make_op(CMat matrix, double unitary_tol) {
  LinearOp op;
  int dim = matrix.dim();
  int arity = 0;
  while ((1 << arity) < dim) ++arity;
  if ((1 << arity) != dim) throw std::invalid_argument("op dimension not a power of two");
  if (arity < 1 || arity > 6) throw std::invalid_argument("op arity out of range [1, 6]");
  op.arity = arity;
  op.unitary = deviation_from_unitary(matrix) <= unitary_tol;
  op.matrix = std::move(matrix);
  return op;
}

StateVector apply_local_op(const StateVector& state, const LinearOp& op,
                           std::span<const int> targets) {
  const int n = state.n_qubits;
  const int k = op.arity;
  if (static_cast<int>(targets.size()) != k)
    throw std::invalid_argument("apply_local_op: arity does not match target count");
  std::uint64_t seen = 0;
  for (int q : targets) {
    if (q < 1 || q > n) throw std::out_of_range("apply_local_op: qubit index out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n - q);
    if (seen & bit) throw std::invalid_argument("apply_local_op: duplicate target");
    seen |= bit;
  }

  StateVector out = state;
  if (k == 1) {
    const cx m[4] = {op.matrix.at(0, 0), op.matrix.at(0, 1), op.matrix.at(1, 0),
                     op.matrix.at(1, 1)};
    kernels::active_ops().apply_1q(out.amplitudes.data(), out.dim(),
                                   static_cast<unsigned>(n - targets[0]), m);
    return out;
  }

  // generic gather/scatter path for k >= 2
  std::vector<unsigned> bits(k);  // bit position of each target, MSB-first op index
  for (int j = 0; j < k; ++j) bits[j] = static_cast<unsigned>(n - targets[j]);
  std::vector<unsigned> free_bits;
  for (unsigned b = 0; b < static_cast<unsigned>(n); ++b)
    if (!(seen >> b & 1)) free_bits.push_back(b);

  const std::size_t sub = std::size_t{1} << k;
  std::vector<cx> in(sub), res(sub);
  const std::size_t outer = std::size_t{1} << free_bits.size();
  for (std::size_t o = 0; o < outer; ++o) {
    std::size_t base = 0;
    for (std::size_t j = 0; j < free_bits.size(); ++j)
      if (o >> j & 1) base |= std::size_t{1} << free_bits[j];
    for (std::size_t pat = 0; pat < sub; ++pat) {
      std::size_t idx = base;
      for (int j = 0; j < k; ++j)
        if (pat >> (k - 1 - j) & 1) idx |= std::size_t{1} << bits[j];
      in[pat] = state.amplitudes[idx];
    }
    for (std::size_t r = 0; r < sub; ++r) {
      cx s{};
      for (std::size_t c = 0; c < sub; ++c)
        s += op.matrix.at(static_cast<int>(r), static_cast<int>(c)) * in[c];
      res[r] = s;
    }
    for (std::size_t pat = 0; pat < sub; ++pat) {
      std::size_t idx = base;
      for (int j = 0; j < k; ++j)
        if (pat >> (k - 1 - j) & 1) idx |= std::size_t{1} << bits[j];
      out.amplitudes[idx] = res[pat];
    }
  }
  return out;
}

double state_norm(const StateVector& state) {
  return std::sqrt(kernels::active_ops().norm_sq(state.amplitudes.data(), state.dim()));
}

Pmf exact_distribution(const StateVector& state) {
  std::vector<double> sq(state.dim());
  kernels::active_ops().abs_sq(state.amplitudes.data(), sq.data(), state.dim());
  double total = 0.0;
  for (double v : sq) total += v;
  if (total <= 0.0) throw std::domain_error("exact_distribution: zero-norm state");
  Pmf pmf(state.n_qubits);
  for (std::size_t i = 0; i < sq.size(); ++i)
    if (sq[i] > 0.0) pmf.add(i, sq[i] / total);
  return pmf;
}

std::pair<double, StateVector> conditional_state(const StateVector& state,
                                                 std::span<const int> measured_qubits,
                                                 std::uint64_t outcome) {
  const int n = state.n_qubits;
  const int k = static_cast<int>(measured_qubits.size());
  if (k < 1 || k > n) throw std::invalid_argument("conditional_state: bad qubit count");
  std::uint64_t mask = 0, want = 0;
  for (int j = 0; j < k; ++j) {
    int q = measured_qubits[j];
    if (q < 1 || q > n) throw std::out_of_range("conditional_state: qubit index out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n - q);
    if (mask & bit) throw std::invalid_argument("conditional_state: duplicate qubit");
    mask |= bit;
    if (outcome >> (k - 1 - j) & 1) want |= bit;
  }

  std::vector<unsigned> rest;  // remaining qubits, original (MSB-first) order
  for (int q = 1; q <= n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - q);
    if (!(mask & bit)) rest.push_back(static_cast<unsigned>(n - q));
  }

  const double total = kernels::active_ops().norm_sq(state.amplitudes.data(), state.dim());
  if (total <= 0.0) throw std::domain_error("conditional_state: zero-norm state");

  StateVector residual;
  residual.n_qubits = n - k;
  residual.amplitudes.assign(std::size_t{1} << rest.size(), cx{});
  double mass = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if ((i & mask) != want) continue;
    mass += std::norm(state.amplitudes[i]);
    std::size_t ridx = 0;
    for (std::size_t j = 0; j < rest.size(); ++j)
      if (i >> rest[j] & 1) ridx |= std::size_t{1} << (rest.size() - 1 - j);
    residual.amplitudes[ridx] = state.amplitudes[i];
  }
  const double prob = mass / total;
  if (mass <= 0.0)
    throw std::domain_error("conditional_state: zero-probability outcome");
  const double scale = 1.0 / std::sqrt(mass);
  for (cx& a : residual.amplitudes) a *= scale;
  return {prob, residual};
}

}  // namespace shallow
