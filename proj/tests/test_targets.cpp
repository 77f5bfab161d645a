#include <cmath>
#include <sstream>

#include "doctest.h"
#include "shallow/pmf.hpp"
#include "shallow/targets.hpp"

using namespace shallow;

namespace {

// independent oracle: residue counts of the unbiased Hamming weight via
// Pascal-triangle counting
std::vector<double> binomial_residue_oracle(int t, int p) {
  std::vector<double> counts(static_cast<std::size_t>(p), 0.0);
  std::vector<double> binom(static_cast<std::size_t>(t) + 1, 0.0);
  binom[0] = 1.0;
  for (int i = 1; i <= t; ++i)
    for (int k = i; k >= 1; --k) binom[static_cast<std::size_t>(k)] += binom[static_cast<std::size_t>(k - 1)];
  double total = std::ldexp(1.0, t);
  for (int k = 0; k <= t; ++k) counts[static_cast<std::size_t>(k % p)] += binom[static_cast<std::size_t>(k)] / total;
  return counts;
}

}  // namespace

TEST_CASE("odd prime predicate and the clamped prime picker") {
  CHECK(is_odd_prime(3));
  CHECK(is_odd_prime(7));
  CHECK_FALSE(is_odd_prime(2));
  CHECK_FALSE(is_odd_prime(9));
  CHECK(largest_odd_prime_at_most(10.9) == 7);
  CHECK(largest_odd_prime_at_most(11.0) == 11);
  CHECK(largest_odd_prime_at_most(2.4) == 3);  // clamped to the smallest usable prime
}

TEST_CASE("mm_int spot values and periodicity") {
  CHECK(mm_int(3, 0) == 0);
  CHECK(mm_int(3, 2) == 1);
  CHECK(mm_int(5, 7) == 0);  // 7 mod 5 = 2 < 2.5
  CHECK_THROWS_AS(mm_int(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(mm_int(2, 1), std::invalid_argument);
  for (int p : {3, 5, 7})
    for (long long j = -3 * p; j <= 3 * p; ++j) CHECK(mm_int(p, j + p) == mm_int(p, j));
}

TEST_CASE("majmod_xor_parity spot values") {
  CHECK(majmod_xor_parity(3, 0b11, 2) == 1);  // mm=1, parity=0
  CHECK(majmod_xor_parity(3, 0, 4) == 0);
  // weight 3 at p=5: mm=1, parity=1 -> 0
  CHECK(majmod_xor_parity(5, 0b0111, 4) == 0);
}

TEST_CASE("pmmajmod hand traces") {
  const BalancedTree t4 = build_tree(4);
  // d = 0 collapses to majmod_xor_parity, exhaustive for n <= 5
  for (int n = 2; n <= 5; ++n) {
    const BalancedTree t = build_tree(n);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << (n - 1)); ++x)
      CHECK(pmmajmod(3, t, x, 0) == majmod_xor_parity(3, x, n - 1));
  }
  // n=4, x=(1,1,0), d=(1,0,1): h=(1,0,0), S = -1+1+0 = 0 -> mm=0, parity=0
  CHECK(pmmajmod(3, t4, 0b110, 0b101) == 0);
}

TEST_CASE("flipping d_1 flips signs downstream of e_1 only") {
  const BalancedTree t4 = build_tree(4);
  // vertices below e_1: v_1 and v_3; v_2 unaffected
  for (std::uint64_t x = 0; x < 8; ++x) {
    for (std::uint64_t d = 0; d < 8; ++d) {
      auto signed_sum = [&](std::uint64_t dd) {
        const std::uint64_t h = path_sums(t4, dd);
        long long s = 0;
        for (int i = 1; i <= 3; ++i)
          if (x >> (3 - i) & 1) s += (h >> (3 - i) & 1) ? -1 : 1;
        return s;
      };
      const std::uint64_t dflip = d ^ 0b100;
      long long expect_change = 0;
      if (x >> 2 & 1) expect_change += 2 * ((path_sums(t4, d) >> 2 & 1) ? 1 : -1);
      if (x & 1) expect_change += 2 * ((path_sums(t4, d) & 1) ? 1 : -1);
      CHECK(signed_sum(dflip) - signed_sum(d) == expect_change);
    }
  }
}

TEST_CASE("augmented target pmfs") {
  const Pmf mm = augmented_target_pmf(TargetKind::MAJMOD_PARITY, 3, 3);
  CHECK(mm.bit_length() == 3);
  CHECK(mm.support_size() == 4);
  for (const auto& [k, v] : mm) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));

  const Pmf pm = augmented_target_pmf(TargetKind::PMMAJMOD, 3, 3);
  CHECK(pm.bit_length() == 5);
  CHECK(pm.support_size() == 16);
  for (const auto& [k, v] : pm) CHECK(v == doctest::Approx(1.0 / 16).epsilon(1e-15));

  // deterministic last bit -> support is exactly half the cube
  CHECK(mm.support_size() * 2 == (std::size_t{1} << mm.bit_length()));
}

TEST_CASE("total_variation basics") {
  Pmf a(2), b(2);
  a.add(0, 0.5);
  a.add(3, 0.5);
  CHECK(total_variation(a, a) == 0.0);
  b.add(1, 0.5);
  b.add(2, 0.5);
  CHECK(total_variation(a, b) == doctest::Approx(1.0).epsilon(1e-15));

  // uniform over 3 bits vs (X, parity(X)): distance exactly 1/2
  Pmf uni(3), par(3);
  for (std::uint64_t z = 0; z < 8; ++z) uni.add(z, 1.0 / 8);
  for (std::uint64_t x = 0; x < 4; ++x)
    par.add((x << 1) | static_cast<std::uint64_t>(__builtin_popcountll(x) & 1), 0.25);
  CHECK(total_variation(uni, par) == doctest::Approx(0.5).epsilon(1e-15));

  Pmf wrong(4);
  CHECK_THROWS_AS(total_variation(a, wrong), std::invalid_argument);
}

TEST_CASE("tvd triangle inequality on random pmfs") {
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) / 9007199254740992.0;
  };
  for (int trial = 0; trial < 20; ++trial) {
    Pmf p(4), q(4), r(4);
    double sp = 0, sq = 0, sr = 0;
    std::vector<double> vp(16), vq(16), vr(16);
    for (int z = 0; z < 16; ++z) {
      vp[z] = next(); vq[z] = next(); vr[z] = next();
      sp += vp[z]; sq += vq[z]; sr += vr[z];
    }
    for (int z = 0; z < 16; ++z) {
      p.add(static_cast<std::uint64_t>(z), vp[z] / sp);
      q.add(static_cast<std::uint64_t>(z), vq[z] / sq);
      r.add(static_cast<std::uint64_t>(z), vr[z] / sr);
    }
    CHECK(total_variation(p, r) <= total_variation(p, q) + total_variation(q, r) + 1e-14);
  }
}

TEST_CASE("mod-p weight DP: t=9, p=3 gives (170,171,171)/512 and TVD 1/768") {
  const auto d = modp_weight_pmf(9, 3, {}, 0.0);
  CHECK(d[0] * 512 == doctest::Approx(170.0).epsilon(1e-12));
  CHECK(d[1] * 512 == doctest::Approx(171.0).epsilon(1e-12));
  CHECK(d[2] * 512 == doctest::Approx(171.0).epsilon(1e-12));
  CHECK(residue_tvd_to_uniform(d) == doctest::Approx(1.0 / 768).epsilon(1e-12));
  CHECK(residue_tvd_to_uniform(d) <= std::sqrt(3.0) * std::exp(-9.0 / 9.0));
}

TEST_CASE("mod-p weight DP: degenerate cases") {
  const auto one = modp_weight_pmf(1, 3, {}, 0.0);
  CHECK(one[0] == doctest::Approx(0.5));
  CHECK(one[1] == doctest::Approx(0.5));
  CHECK(one[2] == 0.0);

  const auto point = modp_weight_pmf(5, 3, {}, 0.5);  // bias 1/2 -> all zeros
  CHECK(point[0] == doctest::Approx(1.0));
}

TEST_CASE("mod-p weight DP matches binomial counting up to t = 20") {
  for (int p : {3, 5, 7}) {
    for (int t = 1; t <= 20; ++t) {
      const auto dp = modp_weight_pmf(t, p, {}, 0.0);
      const auto oracle = binomial_residue_oracle(t, p);
      double sum = 0.0;
      for (int r = 0; r < p; ++r) {
        CHECK(dp[static_cast<std::size_t>(r)] ==
              doctest::Approx(oracle[static_cast<std::size_t>(r)]).epsilon(1e-12));
        sum += dp[static_cast<std::size_t>(r)];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("mod-p DP with coefficients reduces them mod p") {
  const std::vector<long long> coeffs = {1, -2, 4};
  const auto d = modp_weight_pmf(3, 3, coeffs, 0.0);
  const auto e = modp_weight_pmf(3, 3, std::vector<long long>{1, 1, 1}, 0.0);
  for (int r = 0; r < 3; ++r)
    CHECK(d[static_cast<std::size_t>(r)] == doctest::Approx(e[static_cast<std::size_t>(r)]).epsilon(1e-14));
}

TEST_CASE("bias/entropy conversions") {
  CHECK(bias_entropy(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bias_entropy(0.5) == 0.0);
  CHECK(bias_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK_THROWS_AS(bias_entropy(0.6), std::invalid_argument);
  CHECK_THROWS_AS(entropy_to_bias(1.5), std::invalid_argument);

  for (int i = 0; i <= 20; ++i) {
    const double b = 0.5 * i / 20.0;
    CHECK(std::abs(entropy_to_bias(bias_entropy(b)) - b) < 1e-10);
  }
}

TEST_CASE("entropy sandwich 1 - 4b^2 <= H <= (1 - 4b^2)^(1/ln 4)") {
  for (int i = 0; i <= 100; ++i) {
    const double b = 0.5 * i / 100.0;
    const double h = bias_entropy(b);
    const double base = 1.0 - 4.0 * b * b;
    CHECK(h + 1e-12 >= base);
    CHECK(h <= std::pow(base, 1.0 / std::log(4.0)) + 1e-12);
  }
}

TEST_CASE("pmf csv export format and round trip") {
  Pmf p(2);
  p.add(0b00, 0.25);
  p.add(0b11, 0.75);
  std::ostringstream out;
  export_pmf_csv(p, out);
  CHECK(out.str() == "bitstring,probability\n00,0.25\n11,0.75\n");
  std::istringstream in(out.str());
  const Pmf back = import_pmf_csv(in, 2);
  CHECK(total_variation(p, back) == 0.0);
}
