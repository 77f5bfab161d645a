#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "shallow/circuit.hpp"
#include "shallow/targets.hpp"

using namespace shallow;

namespace {

constexpr double kPi = std::numbers::pi;

// closed-form per-weight failure probability of the majmod sampler
double fail_weight(int p, long long s) {
  const double ang = -kPi / 4 + kPi * static_cast<double>(s) / p;
  const double c2 = std::cos(ang) * std::cos(ang);
  return mm_int(p, s) == 0 ? 1.0 - c2 : c2;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// oracle for the GHZ-input sampler: 2^-(n-1) sum_x fail(|x|)
double majmod_tvd_oracle(int n, int p) {
  double tot = 0.0;
  for (int k = 0; k <= n - 1; ++k) tot += binom(n - 1, k) * fail_weight(p, k);
  return std::ldexp(tot, -(n - 1));
}

// oracle for the tree sampler: mean failure over (d, x)
double pmmajmod_tvd_oracle(int n, int p) {
  const BalancedTree tree = build_tree(n);
  const int bits = n - 1;
  double tot = 0.0;
  for (std::uint64_t d = 0; d < (std::uint64_t{1} << bits); ++d) {
    const std::uint64_t h = path_sums(tree, d);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << bits); ++x) {
      long long s = 0;
      for (int i = 0; i < bits; ++i)
        if (x >> i & 1) s += (h >> i & 1) ? -1 : 1;
      tot += fail_weight(p, s);
    }
  }
  return std::ldexp(tot, -2 * bits);
}

double pmf_max_diff(const Pmf& a, const Pmf& b) {
  double r = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      r = std::max(r, ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      r = std::max(r, ib->second);
      ++ib;
    } else {
      r = std::max(r, std::abs(ia->second - ib->second));
      ++ia;
      ++ib;
    }
  }
  return r;
}

}  // namespace

TEST_CASE("even_superposition_prep builds the even-weight superposition") {
  const Pmf p2 = run_exact(even_superposition_prep(2), zero_state(2));
  CHECK(p2.prob(0b00) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p2.prob(0b11) == doctest::Approx(0.5).epsilon(1e-14));

  const Pmf p3 = run_exact(even_superposition_prep(3), zero_state(3));
  CHECK(p3.support_size() == 4);
  for (std::uint64_t z : {0b000u, 0b011u, 0b101u, 0b110u})
    CHECK(p3.prob(z) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p3.prob(0b001) == 0.0);  // odd strings carry no amplitude

  // equals H^(xn) |GHZ_n> amplitude by amplitude
  for (int n : {2, 3, 5}) {
    auto direct = ghz_state(n);
    for (int q = 1; q <= n; ++q)
      direct = apply_local_op(direct, standard_gate("H"), std::vector<int>{q});
    const auto prepped = run_circuit(even_superposition_prep(n), zero_state(n));
    for (std::size_t i = 0; i < direct.dim(); ++i)
      CHECK(std::abs(direct.amplitudes[i] - prepped.amplitudes[i]) < 1e-13);
  }
}

TEST_CASE("nonunitary majmod sampler: depth, marginals, exact TVD") {
  const Circuit c = nonunitary_majmod_circuit(5, 3);
  validate_layers(c);
  CHECK(depth_of(c) == 2);  // H layer + gate layer beyond the input state

  const Pmf pmf = run_exact(c, ghz_state(5));
  const Pmf target = augmented_target_pmf(TargetKind::MAJMOD_PARITY, 5, 3);
  const double tvd = total_variation(pmf, target);
  CHECK(std::abs(tvd - majmod_tvd_oracle(5, 3)) < 1e-12);
  CHECK(std::abs(tvd - 0.20230376744909923) < 1e-12);

  // first n-1 marginals uniform
  std::map<std::uint64_t, double> marg;
  for (const auto& [z, pr] : pmf) marg[z >> 1] += pr;
  for (const auto& [x, pr] : marg) CHECK(std::abs(pr - 1.0 / 16) < 1e-12);
}

TEST_CASE("majmod exact TVD equals the failure-sum oracle on the full grid") {
  for (int p : {3, 5, 7}) {
    for (int n = 3; n <= 13; ++n) {
      const Pmf pmf = run_exact(nonunitary_majmod_circuit(n, p), ghz_state(n));
      const Pmf target = augmented_target_pmf(TargetKind::MAJMOD_PARITY, n, p);
      CHECK(std::abs(total_variation(pmf, target) - majmod_tvd_oracle(n, p)) < 1e-9);
    }
  }
}

TEST_CASE("p -> infinity limit: conditional correctness at weight 0 is 1/2") {
  CHECK(fail_weight(101, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("block circuits reproduce the per-qubit pmf exactly") {
  for (int n = 3; n <= 13; ++n) {
    const Pmf ref = run_exact(nonunitary_majmod_circuit(n, 3), ghz_state(n));
    for (int m : {2, 3}) {
      if (n - 1 < m) continue;
      const Pmf blk = run_exact(block_majmod_circuit(n, 3, m, false), ghz_state(n));
      CHECK(pmf_max_diff(ref, blk) < 1e-12);
    }
  }
}

TEST_CASE("unitary majmod parameterization") {
  CHECK(block_arity_for_exponent(0.45) == 4);  // ceil(1/0.45 + 1) = ceil(3.22)
  CHECK(block_arity_for_exponent(0.34) == 4);
  CHECK(block_arity_for_exponent(0.49) == 4);
  CHECK_THROWS_AS(block_arity_for_exponent(0.5), std::invalid_argument);

  const Circuit c = unitary_majmod_circuit(7, 0.45);
  validate_layers(c);
  // one U block of four qubits plus two per-qubit pseudo-gates
  int ublocks = 0, singles = 0;
  for (const Layer& l : c.layers)
    for (const Placement& pl : l) {
      if (pl.gate.family == GateFamily::U_UNITARIZED) ++ublocks;
      if (pl.gate.family == GateFamily::A_THETA) ++singles;
    }
  CHECK(ublocks == 1);
  CHECK(singles == 2);
}

TEST_CASE("unitary-vs-nonunitary majmod gap stays within the operator budget") {
  const int n = 7;
  const int m = block_arity_for_exponent(0.45);
  const int p = largest_odd_prime_at_most(std::pow(7.0, 0.45));
  CHECK(p == 3);
  const Pmf up = run_exact(unitary_majmod_circuit(n, 0.45), ghz_state(n));
  const Pmf ap = run_exact(block_majmod_circuit(n, p, m, false), ghz_state(n));
  const double gap = total_variation(up, ap);
  const double eps = operator_norm(u_unitarized(m, kPi / p).matrix - a_multi(m, kPi / p).matrix);
  const int blocks = (n - 1) / m;
  CHECK(gap <= 8.0 * blocks * eps);
}

TEST_CASE("theta = 0 block degenerates to the identity") {
  const LinearOp u = u_unitarized(3, 0.0);
  CHECK(max_abs(u.matrix - CMat::identity(8)) < 1e-14);
}

TEST_CASE("poor man's tree state: depth 3 and exact closed form") {
  for (int n = 2; n <= 9; ++n) {
    const Circuit c = poor_mans_ghz_circuit(n);
    validate_layers(c);
    CHECK(depth_of(c) == 3);
    const StateVector got = run_circuit(c, zero_state(2 * n - 1));

    const BalancedTree tree = build_tree(n);
    const int bits = n - 1;
    // each of the 2^(n-1) edge assignments carries two amplitude-
    // 2^{-(n-1)/2}/sqrt(2) vertex strings
    const double want = std::sqrt(std::ldexp(1.0, -(bits + 1)));
    double worst = 0.0;
    for (std::uint64_t idx = 0; idx < got.dim(); ++idx) {
      const std::uint64_t d = idx >> n;
      const std::uint64_t rest = idx & ((std::uint64_t{1} << n) - 1);
      const std::uint64_t x = rest >> 1;
      const std::uint64_t last = rest & 1;
      const std::uint64_t h = path_sums(tree, d);
      const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
      cx expect{};
      if ((last == 0 && x == h) || (last == 1 && x == (~h & mask))) expect = want;
      worst = std::max(worst, std::abs(got.amplitudes[idx] - expect));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("poor man's tree state at n = 2 matches the hand-written state") {
  // (1/2)[ |0>(|00> + |11>) + |1>(|10> + |01>) ]
  const StateVector got = run_circuit(poor_mans_ghz_circuit(2), zero_state(3));
  CHECK(std::abs(got.amplitudes[0b000] - cx(0.5, 0)) < 1e-14);
  CHECK(std::abs(got.amplitudes[0b011] - cx(0.5, 0)) < 1e-14);
  CHECK(std::abs(got.amplitudes[0b110] - cx(0.5, 0)) < 1e-14);
  CHECK(std::abs(got.amplitudes[0b101] - cx(0.5, 0)) < 1e-14);
}

TEST_CASE("edge-qubit marginal of the tree state is uniform") {
  const int n = 5;
  const Pmf pmf = exact_distribution(run_circuit(poor_mans_ghz_circuit(n), zero_state(2 * n - 1)));
  std::map<std::uint64_t, double> marg;
  for (const auto& [z, pr] : pmf) marg[z >> n] += pr;
  CHECK(marg.size() == 16);
  for (const auto& [d, pr] : marg) CHECK(std::abs(pr - 1.0 / 16) < 1e-12);
}

TEST_CASE("pmmajmod sampler: exact TVD equals the (d, x) failure-sum oracle") {
  for (int n = 3; n <= 7; ++n) {
    const Pmf pmf = run_exact(nonunitary_pmmajmod_circuit(n, 3), zero_state(2 * n - 1));
    const Pmf target = augmented_target_pmf(TargetKind::PMMAJMOD, n, 3);
    CHECK(std::abs(total_variation(pmf, target) - pmmajmod_tvd_oracle(n, 3)) < 1e-9);
  }
  // frozen spot value at n = 5 (failure-sum oracle, first verified run)
  CHECK(pmmajmod_tvd_oracle(5, 3) == doctest::Approx(0.21245250264969856).epsilon(1e-12));
}

TEST_CASE("pmmajmod d = 0 slice reproduces the GHZ-input circuit conditionals") {
  const int n = 4, p = 3;
  const StateVector tree_out = run_circuit(nonunitary_pmmajmod_circuit(n, p), zero_state(2 * n - 1));
  std::vector<int> edge_qs;
  for (int i = 1; i < n; ++i) edge_qs.push_back(pm_edge_qubit(n, i));
  auto [pd, slice] = conditional_state(tree_out, edge_qs, 0);
  const Pmf slice_pmf = exact_distribution(slice);
  const Pmf ghz_pmf = run_exact(nonunitary_majmod_circuit(n, p), ghz_state(n));
  CHECK(pmf_max_diff(slice_pmf, ghz_pmf) < 1e-12);
  CHECK(pd == doctest::Approx(1.0 / 8).epsilon(1e-12));
}

TEST_CASE("shuffled block circuits match the per-qubit tree sampler exactly") {
  for (int n : {4, 5, 6, 7}) {
    const Pmf ref = run_exact(nonunitary_pmmajmod_circuit(n, 3), zero_state(2 * n - 1));
    for (int m : {2, 3}) {
      if (n - 1 < m) continue;
      const Pmf blk = run_exact(block_pmmajmod_circuit(n, 3, m, false), zero_state(2 * n - 1));
      CHECK(pmf_max_diff(ref, blk) < 1e-12);
    }
  }
}

TEST_CASE("unitarized tree sampler stays within the operator budget") {
  const int n = 7, p = 3, m = 3;
  const Pmf a = run_exact(block_pmmajmod_circuit(n, p, m, false), zero_state(2 * n - 1));
  const Pmf u = run_exact(block_pmmajmod_circuit(n, p, m, true), zero_state(2 * n - 1));
  const double eps = operator_norm(u_unitarized(m, kPi / p).matrix - a_multi(m, kPi / p).matrix);
  const int blocks = (n - 1) / m;
  CHECK(total_variation(a, u) <= 8.0 * blocks * eps);
}

TEST_CASE("run_exact trivia") {
  Circuit idc;
  idc.n_qubits = 2;
  CHECK(depth_of(idc) == 0);
  const Pmf point = run_exact(idc, zero_state(2));
  CHECK(point.prob(0) == 1.0);
  CHECK(point.support_size() == 1);
}

TEST_CASE("layer validation catches clashes") {
  Circuit bad;
  bad.n_qubits = 2;
  bad.layers.push_back({{spec_standard("H"), {1}, false}, {spec_standard("H"), {1}, false}});
  CHECK_THROWS_AS(validate_layers(bad), std::invalid_argument);

  Circuit mismatch;
  mismatch.n_qubits = 2;
  mismatch.layers.push_back({{spec_standard("CNOT"), {1}, false}});
  CHECK_THROWS_AS(validate_layers(mismatch), std::invalid_argument);
}

TEST_CASE("draw_samples: determinism and point-mass behaviour") {
  Circuit idc;
  idc.n_qubits = 3;
  const auto s1 = draw_samples(idc, basis_state(3, 5), 100, 42);
  for (std::uint64_t z : s1) CHECK(z == 5);

  const Circuit c = nonunitary_majmod_circuit(5, 3);
  const auto a = draw_samples(c, ghz_state(5), 5000, 99);
  const auto b = draw_samples(c, ghz_state(5), 5000, 99);
  CHECK(a == b);
  const auto c2 = draw_samples(c, ghz_state(5), 5000, 100);
  CHECK(a != c2);
  // thread count must not change the stream
  const auto threaded = draw_samples(c, ghz_state(5), 5000, 99, 2);
  CHECK(a == threaded);
}

TEST_CASE("sampled empirical distribution concentrates on the exact pmf") {
  const Circuit c = nonunitary_majmod_circuit(5, 3);
  const Pmf exact = run_exact(c, ghz_state(5));
  const long shots = 1000000;
  const auto samples = draw_samples(c, ghz_state(5), shots, 2024, 2);
  std::map<std::uint64_t, double> freq;
  for (std::uint64_t z : samples) freq[z] += 1.0 / shots;
  Pmf emp(5);
  for (const auto& [z, f] : freq) emp.add(z, f);
  CHECK(total_variation(emp, exact) <= 0.01);
}

TEST_CASE("circuit json round trip preserves the pmf") {
  const Circuit c = block_pmmajmod_circuit(4, 3, 2, true);
  const Circuit back = circuit_from_json(circuit_to_json(c));
  CHECK(back.n_qubits == c.n_qubits);
  CHECK(depth_of(back) == depth_of(c));
  const Pmf p1 = run_exact(c, zero_state(7));
  const Pmf p2 = run_exact(back, zero_state(7));
  CHECK(pmf_max_diff(p1, p2) < 1e-14);
}
