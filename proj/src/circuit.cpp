#include "shallow/circuit.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "shallow/targets.hpp"

namespace shallow {

int depth_of(const Circuit& circuit) { return static_cast<int>(circuit.layers.size()); }

void validate_layers(const Circuit& circuit) {
  for (std::size_t li = 0; li < circuit.layers.size(); ++li) {
    std::uint64_t used = 0;
    for (const Placement& pl : circuit.layers[li]) {
      const LinearOp op = realize(pl.gate);
      if (op.arity != static_cast<int>(pl.targets.size()))
        throw std::invalid_argument("layer " + std::to_string(li) + ": arity/target mismatch");
      for (int q : pl.targets) {
        if (q < 1 || q > circuit.n_qubits)
          throw std::out_of_range("layer " + std::to_string(li) + ": qubit out of range");
        const std::uint64_t bit = std::uint64_t{1} << (q - 1);
        if (used & bit)
          throw std::invalid_argument("layer " + std::to_string(li) + ": qubit " +
                                      std::to_string(q) + " used twice");
        used |= bit;
      }
    }
  }
}

StateVector run_circuit(const Circuit& circuit, const StateVector& input) {
  if (input.n_qubits != circuit.n_qubits)
    throw std::invalid_argument("run_circuit: state width does not match circuit");
  StateVector state = input;
  for (const Layer& layer : circuit.layers)
    for (const Placement& pl : layer)
      state = apply_local_op(state, realize(pl.gate, pl.adjoint), pl.targets);
  return state;
}

Pmf run_exact(const Circuit& circuit, const StateVector& input) {
  return exact_distribution(run_circuit(circuit, input));
}

std::vector<std::uint64_t> draw_samples_pmf(const Pmf& pmf, long shots, std::uint64_t seed,
                                            int threads) {
  if (shots < 1) throw std::invalid_argument("draw_samples: shots must be >= 1");
  std::vector<std::uint64_t> keys;
  std::vector<double> cdf;
  keys.reserve(pmf.support_size());
  cdf.reserve(pmf.support_size());
  double acc = 0.0;
  for (const auto& [k, v] : pmf) {
    acc += v;
    keys.push_back(k);
    cdf.push_back(acc);
  }
  if (keys.empty()) throw std::invalid_argument("draw_samples: empty pmf");
  cdf.back() = std::max(cdf.back(), 1.0);

  constexpr long kBatch = 1 << 14;
  const long batches = (shots + kBatch - 1) / kBatch;
  std::vector<std::uint64_t> out(static_cast<std::size_t>(shots));
  auto run_batch = [&](long b) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(b)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const long begin = b * kBatch;
    const long end = std::min(shots, begin + kBatch);
    for (long i = begin; i < end; ++i) {
      const double u = uni(rng);
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      const std::size_t idx = std::min<std::size_t>(
          static_cast<std::size_t>(it - cdf.begin()), keys.size() - 1);
      out[static_cast<std::size_t>(i)] = keys[idx];
    }
  };
  if (threads <= 1 || batches == 1) {
    for (long b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    const int nt = std::min<long>(threads, batches);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&] {
        for (long b = next.fetch_add(1); b < batches; b = next.fetch_add(1)) run_batch(b);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

std::vector<std::uint64_t> draw_samples(const Circuit& circuit, const StateVector& input,
                                        long shots, std::uint64_t seed, int threads) {
  return draw_samples_pmf(run_exact(circuit, input), shots, seed, threads);
}

Circuit even_superposition_prep(int n) {
  if (n < 2) throw std::invalid_argument("even_superposition_prep: n must be >= 2");
  Circuit c;
  c.n_qubits = n;
  Layer h;
  for (int q = 1; q < n; ++q) h.push_back({spec_standard("H"), {q}, false});
  c.layers.push_back(std::move(h));
  for (int q = 1; q < n; ++q) c.layers.push_back({{spec_standard("CNOT"), {q, n}, false}});
  return c;
}

namespace {

// H everywhere, then a majmod tail on qubits [1, n-1] with the final
// rotation on qubit n. m = 1 means per-qubit gates.
void append_majmod_tail(Circuit& c, int first, int count, int last_qubit, double theta,
                        int m, bool unitarized) {
  Layer h;
  for (int q = first; q < first + count; ++q) h.push_back({spec_standard("H"), {q}, false});
  h.push_back({spec_standard("H"), {last_qubit}, false});
  c.layers.push_back(std::move(h));

  Layer body;
  int q = first;
  if (m >= 2) {
    while (q + m - 1 <= first + count - 1) {
      std::vector<int> ts(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) ts[static_cast<std::size_t>(j)] = q + j;
      const GateSpec g = unitarized ? spec_u_unitarized(m, theta) : spec_a_multi(m, theta);
      body.push_back({g, ts, true});
      q += m;
    }
  }
  for (; q <= first + count - 1; ++q) body.push_back({spec_a_theta(theta), {q}, true});
  body.push_back({spec_x_rotation(-std::numbers::pi / 4.0), {last_qubit}, false});
  c.layers.push_back(std::move(body));
}

// Undo the outcome shuffle of the multi-qubit blocks: the inverse cyclic
// shift on each full block.
void append_block_unshuffle(Circuit& c, int first, int count, int m) {
  if (m < 2) return;
  Layer shuffle;
  int q = first;
  while (q + m - 1 <= first + count - 1) {
    std::vector<int> ts(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) ts[static_cast<std::size_t>(j)] = q + j;
    shuffle.push_back({spec_cyclic_shift(m), ts, true});
    q += m;
  }
  if (!shuffle.empty()) c.layers.push_back(std::move(shuffle));
}

}  // namespace

Circuit nonunitary_majmod_circuit(int n, int p) {
  if (n < 3) throw std::invalid_argument("nonunitary_majmod_circuit: n must be >= 3");
  if (!is_odd_prime(p)) throw std::invalid_argument("nonunitary_majmod_circuit: bad p");
  Circuit c;
  c.n_qubits = n;
  append_majmod_tail(c, 1, n - 1, n, std::numbers::pi / p, 1, false);
  return c;
}

Circuit block_majmod_circuit(int n, int p, int m, bool unitarized) {
  if (n < 3) throw std::invalid_argument("block_majmod_circuit: n must be >= 3");
  if (!is_odd_prime(p)) throw std::invalid_argument("block_majmod_circuit: bad p");
  if (m < 2 || m > 6) throw std::invalid_argument("block_majmod_circuit: m out of range");
  Circuit c;
  c.n_qubits = n;
  append_majmod_tail(c, 1, n - 1, n, std::numbers::pi / p, m, unitarized);
  return c;
}

int block_arity_for_exponent(double c) {
  if (!(c > 0.0 && c < 0.5))
    throw std::invalid_argument("block arity: exponent must be in (0, 1/2)");
  return static_cast<int>(std::ceil(1.0 / c + 1.0));
}

Circuit unitary_majmod_circuit(int n, double c) {
  const int m = block_arity_for_exponent(c);
  const int p = largest_odd_prime_at_most(std::pow(static_cast<double>(n), c));
  return block_majmod_circuit(n, p, m, true);
}

int pm_edge_qubit(int n, int i) { return i; }
int pm_vertex_qubit(int n, int i) { return n - 1 + i; }
int pm_root_qubit(int n) { return 2 * n - 1; }

Circuit poor_mans_ghz_circuit(int n) {
  if (n < 2) throw std::invalid_argument("poor_mans_ghz_circuit: n must be >= 2");
  if (2 * n - 1 > kMaxQubits) throw std::invalid_argument("poor_mans_ghz_circuit: too wide");
  Circuit c;
  c.n_qubits = 2 * n - 1;

  // layer 1: each non-root vertex pairs up with its parent edge; root gets H
  Layer first;
  for (int i = 1; i < n; ++i)
    first.push_back({spec_standard("BELL"), {pm_vertex_qubit(n, i), pm_edge_qubit(n, i)}, false});
  first.push_back({spec_standard("H"), {pm_root_qubit(n)}, false});
  c.layers.push_back(std::move(first));

  // layers 2-3: fold the parent endpoint into each edge, left children
  // first, then right children (disjoint within each layer)
  BalancedTree tree = build_tree(n);
  for (int parity : {1, 0}) {
    Layer layer;
    for (int i = 1; i < n; ++i) {
      if (i % 2 != parity) continue;
      const int parent = tree.parent(i);
      const int pq = parent == 0 ? pm_root_qubit(n) : pm_vertex_qubit(n, parent);
      layer.push_back({spec_standard("CNOT"), {pq, pm_edge_qubit(n, i)}, false});
    }
    if (!layer.empty()) c.layers.push_back(std::move(layer));
  }
  return c;
}

namespace {

Circuit pmmajmod_base(int n, int p, int m, bool unitarized) {
  if (n < 3) throw std::invalid_argument("pmmajmod circuit: n must be >= 3");
  if (!is_odd_prime(p)) throw std::invalid_argument("pmmajmod circuit: bad p");
  Circuit c = poor_mans_ghz_circuit(n);

  Circuit tail;
  tail.n_qubits = c.n_qubits;
  append_majmod_tail(tail, pm_vertex_qubit(n, 1), n - 1, pm_root_qubit(n),
                     std::numbers::pi / p, m, unitarized);
  append_block_unshuffle(tail, pm_vertex_qubit(n, 1), n - 1, m);
  for (Layer& l : tail.layers) c.layers.push_back(std::move(l));
  return c;
}

}  // namespace

Circuit nonunitary_pmmajmod_circuit(int n, int p) { return pmmajmod_base(n, p, 1, false); }

Circuit block_pmmajmod_circuit(int n, int p, int m, bool unitarized) {
  if (m < 2 || m > 6) throw std::invalid_argument("block_pmmajmod_circuit: m out of range");
  return pmmajmod_base(n, p, m, unitarized);
}

Circuit unitary_pmmajmod_circuit(int n, double c) {
  const int m = block_arity_for_exponent(c);
  const int p = largest_odd_prime_at_most(std::pow(static_cast<double>(n), c));
  return block_pmmajmod_circuit(n, p, m, true);
}

std::string circuit_to_json(const Circuit& circuit) {
  nlohmann::json j;
  j["n_qubits"] = circuit.n_qubits;
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& layer : circuit.layers) {
    nlohmann::json jl = nlohmann::json::array();
    for (const Placement& pl : layer) {
      nlohmann::json jp;
      jp["gate"] = nlohmann::json::parse(pl.gate.to_json());
      jp["targets"] = pl.targets;
      jp["adjoint"] = pl.adjoint;
      jl.push_back(jp);
    }
    layers.push_back(jl);
  }
  j["layers"] = layers;
  return j.dump();
}

Circuit circuit_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Circuit c;
  c.n_qubits = j.at("n_qubits").get<int>();
  for (const auto& jl : j.at("layers")) {
    Layer layer;
    for (const auto& jp : jl) {
      Placement pl;
      pl.gate = GateSpec::from_json(jp.at("gate").dump());
      pl.targets = jp.at("targets").get<std::vector<int>>();
      pl.adjoint = jp.at("adjoint").get<bool>();
      layer.push_back(std::move(pl));
    }
    c.layers.push_back(std::move(layer));
  }
  return c;
}

}  // namespace shallow
