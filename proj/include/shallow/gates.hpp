#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shallow/statevector.hpp"

namespace shallow {

enum class GateFamily { A_THETA, A_MULTI, U_UNITARIZED, XROT, CYCLIC, STANDARD };

// Serializable description of one gate instance. `raw` carries an explicit
// 2x2 matrix for compiled single-qubit gates (STANDARD family, name CUSTOM1Q).
struct GateSpec {
  GateFamily family = GateFamily::STANDARD;
  int m = 1;
  double theta = 0.0;
  std::string name;
  std::vector<cx> raw;

  std::string to_json() const;
  static GateSpec from_json(std::string_view text);
};

// x-rotation exp(i theta X)
LinearOp x_rotation(double theta);

// Identity on |0>, exp(-i theta X) on |1>. Linear but not unitary for
// generic theta.
LinearOp a_theta(double theta);

// m-qubit pseudo-gate sending |x_1..x_m> to ⊗_j exp(-i theta X x_{j-1}) |x_j>
// with x_0 := x_m (each qubit rotated conditioned on the previous one,
// cyclically). Collapses to the single-qubit gate family at m = 1.
LinearOp a_multi(int m, double theta);

// Unitary completion of a_multi: basis states with leading bit 0 map as
// a_multi does, their complements get the overlap with the paired column
// removed and renormalized. Rejects theta where the renormalizer vanishes
// (|sin theta|^(2m) = 1).
LinearOp u_unitarized(int m, double theta);

// C_m |x_1 x_2 .. x_m> = |x_2 .. x_m x_1>
LinearOp cyclic_shift(int m);

// name in {H, X, Z, CNOT, BELL}. BELL is the fused two-qubit prep
// CNOT_{1,2} (H ⊗ I), used by the depth-3 tree-state circuit.
LinearOp standard_gate(std::string_view name);

LinearOp realize(const GateSpec& spec);
LinearOp realize(const GateSpec& spec, bool adjoint_flag);

GateSpec spec_a_theta(double theta);
GateSpec spec_a_multi(int m, double theta);
GateSpec spec_u_unitarized(int m, double theta);
GateSpec spec_x_rotation(double theta);
GateSpec spec_cyclic_shift(int m);
GateSpec spec_standard(std::string_view name);
GateSpec spec_custom_1q(const CMat& u);

}  // namespace shallow
