#include "shallow/targets.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace shallow {

bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int q = 3; q * q <= p; q += 2)
    if (p % q == 0) return false;
  return true;
}

int largest_odd_prime_at_most(double x) {
  int n = static_cast<int>(std::floor(x));
  for (int p = n; p >= 3; --p)
    if (is_odd_prime(p)) return p;
  return 3;
}

int mm_int(int p, long long j) {
  if (!is_odd_prime(p)) throw std::invalid_argument("mm_int: p must be an odd prime");
  long long r = j % p;
  if (r < 0) r += p;
  return 2 * r < p ? 0 : 1;
}

int majmod_xor_parity(int p, std::uint64_t x, int nbits) {
  if (nbits < 0 || nbits > 63) throw std::invalid_argument("majmod_xor_parity: bad width");
  if (nbits < 63 && (x >> nbits) != 0)
    throw std::invalid_argument("majmod_xor_parity: x wider than nbits");
  const int w = std::popcount(x);
  return mm_int(p, w) ^ (w & 1);
}

int pmmajmod(int p, const BalancedTree& tree, std::uint64_t x, std::uint64_t d) {
  const int bits = tree.n_vertices - 1;
  if (bits < 63 && ((x >> bits) != 0 || (d >> bits) != 0))
    throw std::invalid_argument("pmmajmod: argument wider than n-1 bits");
  const std::uint64_t h = path_sums(tree, d);
  long long sum = 0;
  for (int i = 1; i <= bits; ++i) {
    if (x >> (bits - i) & 1) sum += (h >> (bits - i) & 1) ? -1 : 1;
  }
  return mm_int(p, sum) ^ (std::popcount(x) & 1);
}

Pmf augmented_target_pmf(TargetKind kind, int n, int p) {
  if (kind == TargetKind::MAJMOD_PARITY) {
    if (n < 2 || n > 24) throw std::invalid_argument("augmented_target_pmf: n out of range");
    Pmf pmf(n);
    const int xbits = n - 1;
    const double mass = std::ldexp(1.0, -xbits);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << xbits); ++x) {
      const std::uint64_t b = static_cast<std::uint64_t>(majmod_xor_parity(p, x, xbits));
      pmf.add((x << 1) | b, mass);
    }
    return pmf;
  }
  const int total_bits = 2 * n - 1;
  if (n < 2 || total_bits > 24)
    throw std::invalid_argument("augmented_target_pmf: output wider than 24 bits");
  BalancedTree tree = build_tree(n);
  Pmf pmf(total_bits);
  const int zbits = 2 * n - 2;
  const double mass = std::ldexp(1.0, -zbits);
  for (std::uint64_t d = 0; d < (std::uint64_t{1} << (n - 1)); ++d)
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << (n - 1)); ++x) {
      const std::uint64_t b = static_cast<std::uint64_t>(pmmajmod(p, tree, x, d));
      pmf.add((d << n) | (x << 1) | b, mass);
    }
  return pmf;
}

std::vector<double> modp_weight_pmf(int t, int p, std::span<const long long> coefficients,
                                    double bias) {
  if (t < 1) throw std::invalid_argument("modp_weight_pmf: t must be >= 1");
  if (p < 2) throw std::invalid_argument("modp_weight_pmf: p must be >= 2");
  if (std::abs(bias) > 0.5) throw std::invalid_argument("modp_weight_pmf: |bias| > 1/2");
  if (!coefficients.empty() && static_cast<int>(coefficients.size()) != t)
    throw std::invalid_argument("modp_weight_pmf: coefficient count mismatch");
  const double p1 = 0.5 - bias;
  std::vector<double> dist(static_cast<std::size_t>(p), 0.0);
  dist[0] = 1.0;
  std::vector<double> next(static_cast<std::size_t>(p));
  for (int i = 0; i < t; ++i) {
    long long a = coefficients.empty() ? 1 : coefficients[static_cast<std::size_t>(i)];
    long long shift = a % p;
    if (shift < 0) shift += p;
    std::fill(next.begin(), next.end(), 0.0);
    for (int r = 0; r < p; ++r) {
      next[static_cast<std::size_t>(r)] += dist[static_cast<std::size_t>(r)] * (1.0 - p1);
      next[static_cast<std::size_t>((r + shift) % p)] += dist[static_cast<std::size_t>(r)] * p1;
    }
    dist.swap(next);
  }
  return dist;
}

double residue_tvd_to_uniform(std::span<const double> residue_pmf) {
  const double u = 1.0 / static_cast<double>(residue_pmf.size());
  double s = 0.0;
  for (double v : residue_pmf) s += std::abs(v - u);
  return 0.5 * s;
}

void export_residues_csv(std::span<const double> residue_pmf, std::ostream& out) {
  out << "residue,probability\n";
  char buf[64];
  for (std::size_t r = 0; r < residue_pmf.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", residue_pmf[r]);
    out << r << ',' << buf << '\n';
  }
}

double bias_entropy(double b) {
  if (std::abs(b) > 0.5) throw std::invalid_argument("bias_entropy: |b| > 1/2");
  const double p0 = 0.5 + b, p1 = 0.5 - b;
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

double entropy_to_bias(double h) {
  if (h < 0.0 || h > 1.0) throw std::invalid_argument("entropy_to_bias: h outside [0, 1]");
  double lo = 0.0, hi = 0.5;  // entropy decreases in b on [0, 1/2]
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bias_entropy(mid) > h)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace shallow
