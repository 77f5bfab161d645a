#pragma once

#include <string>
#include <vector>

#include "shallow/circuit.hpp"
#include "shallow/statevector.hpp"

namespace shallow {

// Unitary differing from the identity only on the span of two basis
// states i < j; `core` is the 2x2 action on (|i>, |j>).
struct TwoLevelUnitary {
  int dim = 0;
  int i = 0;
  int j = 0;
  CMat core;  // 2x2

  CMat full() const;
};

// Givens-style elimination: returns factors whose left-to-right product
// equals U up to a global phase. Identity gives an empty list.
std::vector<TwoLevelUnitary> two_level_factorization(const LinearOp& op, double tol = 1e-12);

struct ElemGate {
  bool is_cnot = false;
  int control = 0;  // 1-based, CNOT only
  int target = 0;   // 1-based
  CMat u;           // 2x2, single-qubit gates only
};

// Straight-line program over arbitrary 1-qubit gates and CNOTs, listed in
// application order.
struct ElementaryProgram {
  int n_qubits = 0;
  std::vector<ElemGate> gates;

  std::string to_json() const;
};

CMat program_matrix(const ElementaryProgram& prog);
StateVector run_program(const ElementaryProgram& prog, const StateVector& input);
Circuit program_as_circuit(const ElementaryProgram& prog);

// Gray-code routing plus multi-controlled single-qubit expansion.
ElementaryProgram synthesize_two_level(int n_qubits, const TwoLevelUnitary& tl);

// Full pipeline; the simulated program matches op.matrix up to a global
// phase (1e-9 on everything this project compiles).
ElementaryProgram compile_unitary(const LinearOp& op);

// Replace every unitary placement with its compiled program; non-unitary
// pseudo-gate placements pass through unchanged.
Circuit compile_circuit(const Circuit& circuit);

}  // namespace shallow
