#include "shallow/compiler.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace shallow {

namespace {

constexpr double kPi = std::numbers::pi;

CMat mat2(cx a, cx b, cx c, cx d) {
  CMat m(2);
  m.at(0, 0) = a; m.at(0, 1) = b; m.at(1, 0) = c; m.at(1, 1) = d;
  return m;
}

CMat rz(double t) { return mat2(std::exp(cx(0, -t / 2)), 0, 0, std::exp(cx(0, t / 2))); }
CMat ry(double t) {
  return mat2(std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2));
}

// ZYZ angles: U = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)
struct Zyz {
  double alpha, beta, gamma, delta;
};

// V := e^{-i alpha} U lands in SU(2):
//   V = [[e^{-i(b+d)/2} cos(g/2), -e^{-i(b-d)/2} sin(g/2)],
//        [e^{+i(b-d)/2} sin(g/2),  e^{+i(b+d)/2} cos(g/2)]]
Zyz zyz_decompose(const CMat& u) {
  Zyz r{};
  const cx det = u.at(0, 0) * u.at(1, 1) - u.at(0, 1) * u.at(1, 0);
  r.alpha = 0.5 * std::arg(det);
  const cx s = std::exp(cx(0, -r.alpha));
  const cx v00 = s * u.at(0, 0), v10 = s * u.at(1, 0), v11 = s * u.at(1, 1);
  r.gamma = 2.0 * std::atan2(std::abs(v10), std::abs(v00));
  const double cg = std::cos(r.gamma / 2.0), sg = std::sin(r.gamma / 2.0);
  if (sg < 1e-12) {
    r.gamma = 2.0 * std::asin(std::min(1.0, std::abs(v10)));
    r.beta = 2.0 * std::arg(v11);
    r.delta = 0.0;
  } else if (cg < 1e-12) {
    r.gamma = kPi;
    r.beta = 2.0 * std::arg(v10);
    r.delta = 0.0;
  } else {
    r.beta = std::arg(v11 / cg) + std::arg(v10 / sg);
    r.delta = std::arg(v11 / cg) - std::arg(v10 / sg);
  }
  return r;
}

CMat matrix_sqrt_unitary(const CMat& u) {
  // principal square root of a 2x2 unitary via eigendecomposition
  const cx tr = u.at(0, 0) + u.at(1, 1);
  const cx det = u.at(0, 0) * u.at(1, 1) - u.at(0, 1) * u.at(1, 0);
  const cx disc = std::sqrt(tr * tr - 4.0 * det);
  const cx l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
  if (std::abs(l1 - l2) < 1e-14) {
    // a unitary with a repeated eigenvalue is a scalar
    const cx root = std::sqrt(l1);
    return mat2(root, 0, 0, root);
  }
  // eigenvectors of a normal 2x2
  auto eigvec = [&](cx l) -> std::pair<cx, cx> {
    const cx r1 = u.at(0, 0) - l, r2 = u.at(0, 1);
    if (std::abs(r1) + std::abs(r2) > 1e-14) {
      // row (r1 r2) annihilates the eigenvector
      cx v0 = -r2, v1 = r1;
      const double n = std::sqrt(std::norm(v0) + std::norm(v1));
      return {v0 / n, v1 / n};
    }
    const cx s1 = u.at(1, 0), s2 = u.at(1, 1) - l;
    cx v0 = -s2, v1 = s1;
    const double n = std::sqrt(std::norm(v0) + std::norm(v1));
    return {v0 / n, v1 / n};
  };
  auto [a1, b1] = eigvec(l1);
  auto [a2, b2] = eigvec(l2);
  const cx s1 = std::sqrt(l1), s2 = std::sqrt(l2);
  CMat m(2);
  m.at(0, 0) = s1 * a1 * std::conj(a1) + s2 * a2 * std::conj(a2);
  m.at(0, 1) = s1 * a1 * std::conj(b1) + s2 * a2 * std::conj(b2);
  m.at(1, 0) = s1 * b1 * std::conj(a1) + s2 * b2 * std::conj(a2);
  m.at(1, 1) = s1 * b1 * std::conj(b1) + s2 * b2 * std::conj(b2);
  return m;
}

bool is_identity2(const CMat& u, double tol) {
  return std::abs(u.at(0, 0) - 1.0) < tol && std::abs(u.at(1, 1) - 1.0) < tol &&
         std::abs(u.at(0, 1)) < tol && std::abs(u.at(1, 0)) < tol;
}

bool is_pauli_x2(const CMat& u, double tol) {
  return std::abs(u.at(0, 1) - 1.0) < tol && std::abs(u.at(1, 0) - 1.0) < tol &&
         std::abs(u.at(0, 0)) < tol && std::abs(u.at(1, 1)) < tol;
}

void emit_1q(ElementaryProgram& prog, int target, const CMat& u) {
  if (is_identity2(u, 1e-15)) return;
  prog.gates.push_back({false, 0, target, u});
}

void emit_cnot(ElementaryProgram& prog, int control, int target) {
  prog.gates.push_back({true, control, target, CMat()});
}

// controlled-V via the ABC construction (5 gates + the phase fold-in)
void emit_controlled_1q(ElementaryProgram& prog, int control, int target, const CMat& v);

// k-controlled V on `controls` (all control-on-1), recursion on sqrt(V)
void emit_multi_controlled_1q(ElementaryProgram& prog, const std::vector<int>& controls,
                              int target, const CMat& v) {
  if (controls.empty()) {
    emit_1q(prog, target, v);
    return;
  }
  if (controls.size() == 1) {
    emit_controlled_1q(prog, controls[0], target, v);
    return;
  }
  const CMat w = matrix_sqrt_unitary(v);
  const CMat wd = adjoint(w);
  std::vector<int> rest(controls.begin(), controls.end() - 1);
  const int last = controls.back();
  emit_controlled_1q(prog, last, target, w);
  emit_multi_controlled_1q(prog, rest, last, standard_gate("X").matrix);
  emit_controlled_1q(prog, last, target, wd);
  emit_multi_controlled_1q(prog, rest, last, standard_gate("X").matrix);
  emit_multi_controlled_1q(prog, rest, target, w);
}

void emit_controlled_1q(ElementaryProgram& prog, int control, int target, const CMat& v) {
  if (is_identity2(v, 1e-15)) return;
  if (is_pauli_x2(v, 1e-15)) {
    emit_cnot(prog, control, target);
    return;
  }
  const Zyz z = zyz_decompose(v);
  const CMat a = rz(z.beta) * ry(z.gamma / 2.0);
  const CMat b = ry(-z.gamma / 2.0) * rz(-(z.delta + z.beta) / 2.0);
  const CMat c = rz((z.delta - z.beta) / 2.0);
  emit_1q(prog, target, c);
  emit_cnot(prog, control, target);
  emit_1q(prog, target, b);
  emit_cnot(prog, control, target);
  emit_1q(prog, target, a);
  // phase e^{i alpha} on the control
  if (std::abs(std::remainder(z.alpha, 2.0 * kPi)) > 1e-15)
    emit_1q(prog, control, mat2(1.0, 0, 0, std::exp(cx(0, z.alpha))));
}

}  // namespace

CMat TwoLevelUnitary::full() const {
  CMat m = CMat::identity(dim);
  m.at(i, i) = core.at(0, 0);
  m.at(i, j) = core.at(0, 1);
  m.at(j, i) = core.at(1, 0);
  m.at(j, j) = core.at(1, 1);
  return m;
}

std::vector<TwoLevelUnitary> two_level_factorization(const LinearOp& op, double tol) {
  if (!op.unitary) throw std::invalid_argument("two_level_factorization: input not unitary");
  if (op.arity > 4) throw std::invalid_argument("two_level_factorization: arity above 4");
  const int d = op.matrix.dim();
  CMat a = op.matrix;
  std::vector<TwoLevelUnitary> factors;  // product of factors (in order) = op

  // zero the below-diagonal entries column by column; G† A kills A[r][c]
  for (int c = 0; c < d - 1; ++c) {
    for (int r = c + 1; r < d; ++r) {
      if (std::abs(a.at(r, c)) <= tol) continue;
      const cx x = a.at(c, c), y = a.at(r, c);
      const double nn = std::sqrt(std::norm(x) + std::norm(y));
      TwoLevelUnitary g;
      g.dim = d;
      g.i = c;
      g.j = r;
      g.core = mat2(x / nn, -std::conj(y) / nn, y / nn, std::conj(x) / nn);
      // apply g† to a; g† (x, y) = (nn, 0)
      const CMat gd = adjoint(g.core);
      for (int col = 0; col < d; ++col) {
        const cx vi = a.at(c, col), vj = a.at(r, col);
        a.at(c, col) = gd.at(0, 0) * vi + gd.at(0, 1) * vj;
        a.at(r, col) = gd.at(1, 0) * vi + gd.at(1, 1) * vj;
      }
      factors.push_back(std::move(g));
    }
  }

  // a is now diagonal with unit-modulus phases; peel them against the last
  // entry so the leftover is a global phase
  const cx last = a.at(d - 1, d - 1);
  for (int k = 0; k < d - 1; ++k) {
    const cx ph = a.at(k, k) / last;
    if (std::abs(ph - 1.0) <= tol) continue;
    TwoLevelUnitary g;
    g.dim = d;
    g.i = k;
    g.j = d - 1;
    g.core = mat2(ph, 0, 0, 1.0);
    factors.push_back(std::move(g));
  }
  return factors;
}

CMat program_matrix(const ElementaryProgram& prog) {
  const int n = prog.n_qubits;
  CMat m = CMat::identity(1 << n);
  for (const ElemGate& g : prog.gates) {
    CMat full = CMat::identity(1 << n);
    if (g.is_cnot) {
      const int cb = n - g.control, tb = n - g.target;
      CMat step(1 << n);
      for (int z = 0; z < (1 << n); ++z) {
        int zz = z;
        if (z >> cb & 1) zz ^= 1 << tb;
        step.at(zz, z) = 1.0;
      }
      full = step;
    } else {
      const int tb = n - g.target;
      CMat step(1 << n);
      for (int z = 0; z < (1 << n); ++z) {
        const int bit = z >> tb & 1;
        for (int nb = 0; nb < 2; ++nb) {
          const cx v = g.u.at(nb, bit);
          if (v == cx{}) continue;
          const int zz = (z & ~(1 << tb)) | (nb << tb);
          step.at(zz, z) = v;
        }
      }
      full = step;
    }
    m = full * m;
  }
  return m;
}

StateVector run_program(const ElementaryProgram& prog, const StateVector& input) {
  StateVector state = input;
  const LinearOp cnot = standard_gate("CNOT");
  for (const ElemGate& g : prog.gates) {
    if (g.is_cnot) {
      const int ts[2] = {g.control, g.target};
      state = apply_local_op(state, cnot, ts);
    } else {
      const int ts[1] = {g.target};
      state = apply_local_op(state, make_op(g.u), ts);
    }
  }
  return state;
}

Circuit program_as_circuit(const ElementaryProgram& prog) {
  Circuit c;
  c.n_qubits = prog.n_qubits;
  for (const ElemGate& g : prog.gates) {
    if (g.is_cnot)
      c.layers.push_back({{spec_standard("CNOT"), {g.control, g.target}, false}});
    else
      c.layers.push_back({{spec_custom_1q(g.u), {g.target}, false}});
  }
  return c;
}

ElementaryProgram synthesize_two_level(int n_qubits, const TwoLevelUnitary& tl) {
  if (n_qubits > 4) throw std::invalid_argument("synthesize_two_level: dimension cap is 4 qubits");
  if (tl.dim != (1 << n_qubits))
    throw std::invalid_argument("synthesize_two_level: dimension mismatch");
  ElementaryProgram prog;
  prog.n_qubits = n_qubits;
  if (is_identity2(tl.core, 1e-15)) return prog;

  // Gray-code route from state i to a neighbor of j
  std::vector<int> path;
  int cur = tl.i;
  path.push_back(cur);
  int diff = cur ^ tl.j;
  while (std::popcount(static_cast<unsigned>(diff)) > 1) {
    const int bit = std::bit_floor(static_cast<unsigned>(diff));
    cur ^= bit;
    path.push_back(cur);
    diff = cur ^ tl.j;
  }

  auto route = [&](int from, int to) {
    // multi-controlled X flipping `from` into `to`, controls on the shared
    // bits at their values in `to`
    const int flip = from ^ to;
    const int flip_bit = std::countr_zero(static_cast<unsigned>(flip));
    const int flip_qubit = n_qubits - flip_bit;
    std::vector<int> ones, zeros;
    for (int b = 0; b < n_qubits; ++b) {
      if (b == flip_bit) continue;
      const int q = n_qubits - b;
      if (to >> b & 1)
        ones.push_back(q);
      else
        zeros.push_back(q);
    }
    for (int q : zeros) emit_1q(prog, q, standard_gate("X").matrix);
    std::vector<int> controls = ones;
    controls.insert(controls.end(), zeros.begin(), zeros.end());
    emit_multi_controlled_1q(prog, controls, flip_qubit, standard_gate("X").matrix);
    for (int q : zeros) emit_1q(prog, q, standard_gate("X").matrix);
  };

  for (std::size_t k = 0; k + 1 < path.size(); ++k) route(path[k], path[k + 1]);

  // core gate: acts on the bit where path.back() and j differ, controlled
  // on every other bit at j's value
  const int src = path.back();
  const int flip = src ^ tl.j;
  const int flip_bit = std::countr_zero(static_cast<unsigned>(flip));
  const int flip_qubit = n_qubits - flip_bit;
  std::vector<int> ones, zeros;
  for (int b = 0; b < n_qubits; ++b) {
    if (b == flip_bit) continue;
    const int q = n_qubits - b;
    if (tl.j >> b & 1)
      ones.push_back(q);
    else
      zeros.push_back(q);
  }
  // orientation: |src> plays the role of the core's first basis state; if
  // src has the flip bit set the core is conjugated by X
  CMat core = tl.core;
  if (src >> flip_bit & 1) {
    const CMat x = standard_gate("X").matrix;
    core = x * core * x;
  }
  for (int q : zeros) emit_1q(prog, q, standard_gate("X").matrix);
  std::vector<int> controls = ones;
  controls.insert(controls.end(), zeros.begin(), zeros.end());
  emit_multi_controlled_1q(prog, controls, flip_qubit, core);
  for (int q : zeros) emit_1q(prog, q, standard_gate("X").matrix);

  // undo the routing
  for (std::size_t k = path.size(); k-- > 1;) route(path[k], path[k - 1]);
  return prog;
}

ElementaryProgram compile_unitary(const LinearOp& op) {
  if (!op.unitary) throw std::invalid_argument("compile_unitary: input not unitary");
  const int n = op.arity;
  ElementaryProgram prog;
  prog.n_qubits = n;
  const std::vector<TwoLevelUnitary> factors = two_level_factorization(op);
  // product(factors) = op, leftmost applied last
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    ElementaryProgram part = synthesize_two_level(n, *it);
    prog.gates.insert(prog.gates.end(), part.gates.begin(), part.gates.end());
  }
  return prog;
}

Circuit compile_circuit(const Circuit& circuit) {
  Circuit out;
  out.n_qubits = circuit.n_qubits;
  for (const Layer& layer : circuit.layers) {
    for (const Placement& pl : layer) {
      const LinearOp op = realize(pl.gate, pl.adjoint);
      if (!op.unitary) {
        out.layers.push_back({pl});
        continue;
      }
      const ElementaryProgram prog = compile_unitary(op);
      if (prog.gates.empty()) continue;
      for (const ElemGate& g : prog.gates) {
        // program qubits are 1..arity, mapped onto the placement targets
        if (g.is_cnot) {
          const int cq = pl.targets[static_cast<std::size_t>(g.control - 1)];
          const int tq = pl.targets[static_cast<std::size_t>(g.target - 1)];
          out.layers.push_back({{spec_standard("CNOT"), {cq, tq}, false}});
        } else {
          const int tq = pl.targets[static_cast<std::size_t>(g.target - 1)];
          out.layers.push_back({{spec_custom_1q(g.u), {tq}, false}});
        }
      }
    }
  }
  return out;
}

std::string ElementaryProgram::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  nlohmann::json gs = nlohmann::json::array();
  for (const ElemGate& g : gates) {
    if (g.is_cnot) {
      gs.push_back({{"gate", "CNOT"}, {"control", g.control}, {"target", g.target}});
    } else {
      nlohmann::json m = nlohmann::json::array();
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m.push_back({g.u.at(r, c).real(), g.u.at(r, c).imag()});
      gs.push_back({{"gate", "U1Q"}, {"target", g.target}, {"matrix", m}});
    }
  }
  j["gates"] = gs;
  return j.dump();
}

}  // namespace shallow
