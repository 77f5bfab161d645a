#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shallow/linalg.hpp"
#include "shallow/pmf.hpp"

namespace shallow {

inline constexpr int kMaxQubits = 24;

// Dense amplitude vector over n-qubit basis strings. Qubit 1 is the most
// significant basis bit: index(z) = sum_i z_i * 2^(n-i). Operations return
// new states; nothing mutates a caller's state.
struct StateVector {
  int n_qubits = 0;
  std::vector<cx> amplitudes;

  std::size_t dim() const { return amplitudes.size(); }
};

StateVector zero_state(int n_qubits);
StateVector basis_state(int n_qubits, std::uint64_t index);
StateVector ghz_state(int n_qubits);
StateVector random_state(int n_qubits, std::uint64_t seed);  // normalized

// Constant-size operator with a unitarity tag. Arity is capped at 6.
struct LinearOp {
  int arity = 0;
  CMat matrix;
  bool unitary = false;
};

LinearOp make_op(CMat matrix, double unitary_tol = 1e-12);

// (I ⊗ M ⊗ I) |psi> with M placed on `targets`; targets[0] is the most
// significant bit of the op's own index space.
StateVector apply_local_op(const StateVector& state, const LinearOp& op,
                           std::span<const int> targets);

double state_norm(const StateVector& state);

// Born-rule pmf of the renormalized state. Throws on a zero-norm state.
Pmf exact_distribution(const StateVector& state);

// Probability of `outcome` on `measured_qubits` plus the renormalized
// residual state on the remaining qubits (original order). Throws on a
// zero-probability outcome.
std::pair<double, StateVector> conditional_state(const StateVector& state,
                                                 std::span<const int> measured_qubits,
                                                 std::uint64_t outcome);

}  // namespace shallow
