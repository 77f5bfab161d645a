#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shallow/gates.hpp"
#include "shallow/statevector.hpp"

namespace shallow {

struct Placement {
  GateSpec gate;
  std::vector<int> targets;  // 1-based qubits; targets[0] is the op's MSB
  bool adjoint = false;
};

using Layer = std::vector<Placement>;

// Layered gate list with depth = layer count. Targets within a layer must
// be pairwise disjoint; validate_layers enforces it.
struct Circuit {
  int n_qubits = 0;
  std::vector<Layer> layers;
};

int depth_of(const Circuit& circuit);
void validate_layers(const Circuit& circuit);

StateVector run_circuit(const Circuit& circuit, const StateVector& input);
Pmf run_exact(const Circuit& circuit, const StateVector& input);

// Seeded i.i.d. draws from run_exact's pmf. Deterministic for a fixed seed
// regardless of thread count (per-batch derived seeds).
std::vector<std::uint64_t> draw_samples(const Circuit& circuit, const StateVector& input,
                                        long shots, std::uint64_t seed, int threads = 1);
std::vector<std::uint64_t> draw_samples_pmf(const Pmf& pmf, long shots, std::uint64_t seed,
                                            int threads = 1);

// |+>^(n-1)|0> then a CNOT fan into the last qubit; output is the uniform
// superposition over even-parity strings.
Circuit even_superposition_prep(int n);

// Expects a GHZ input: H everywhere, adjoint a_theta(pi/p) on the first
// n-1 qubits, exp(-i pi X / 4) on the last.
Circuit nonunitary_majmod_circuit(int n, int p);

// Same distribution realized with m-qubit blocks on the first n-1 qubits;
// remainder qubits (m not dividing n-1) fall back to per-qubit gates.
// unitarized=true swaps each block for its unitary completion.
Circuit block_majmod_circuit(int n, int p, int m, bool unitarized);

// Paper parameterization: p = largest odd prime <= n^c, m' = ceil(1/c + 1),
// theta = pi/p; U blocks on the first n-1 qubits.
Circuit unitary_majmod_circuit(int n, double c);
int block_arity_for_exponent(double c);

// Depth-3 prep of the tree state on 2n-1 qubits from |0...0>: a layer of
// fused (H then CNOT) pair gates on (vertex, parent-edge) pairs plus H on
// the root, then two CNOT layers from parent vertices into edges.
Circuit poor_mans_ghz_circuit(int n);

// 2n-1 qubit sampler from |0...0>: tree-state prep, then the majmod tail
// on the vertex qubits. Output order (d, x, final bit).
Circuit nonunitary_pmmajmod_circuit(int n, int p);
Circuit block_pmmajmod_circuit(int n, int p, int m, bool unitarized);
Circuit unitary_pmmajmod_circuit(int n, double c);

// Qubit layout of the tree-state circuits.
int pm_edge_qubit(int n, int i);    // e_i, i in [1, n-1]
int pm_vertex_qubit(int n, int i);  // v_i, i in [1, n-1]
int pm_root_qubit(int n);           // v_0 (last)

std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

}  // namespace shallow
