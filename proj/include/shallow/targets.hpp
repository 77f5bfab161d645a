#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shallow/bintree.hpp"
#include "shallow/pmf.hpp"

namespace shallow {

bool is_odd_prime(int p);

// Largest prime <= x, clamped up to 3 so the result is always an odd prime
// usable as a rotation denominator.
int largest_odd_prime_at_most(double x);

// 0 if (j mod p) < p/2, else 1. The residue is reduced into [0, p) first,
// so negative sums are fine.
int mm_int(int p, long long j);

// mm_int(p, |x|) XOR parity(x) over an nbits-wide x.
int majmod_xor_parity(int p, std::uint64_t x, int nbits);

// mm_int of the sign-twisted vertex sum sum_i x_i * (-1)^{h(d)_i}, XOR
// parity(x). x and d are (n-1)-bit masks in tree order.
int pmmajmod(int p, const BalancedTree& tree, std::uint64_t x, std::uint64_t d);

enum class TargetKind { MAJMOD_PARITY, PMMAJMOD };

// (X, f(X)): uniform first coordinate, deterministic final bit.
// MAJMOD_PARITY: n-bit strings (x has n-1 bits). PMMAJMOD: (2n-1)-bit
// strings ordered (d, x, final bit).
Pmf augmented_target_pmf(TargetKind kind, int n, int p);

// Exact distribution of sum_i a_i X_i mod p with independent X_i,
// Pr[X_i = 1] = 1/2 - bias. Entry r of the result is Pr[residue = r].
std::vector<double> modp_weight_pmf(int t, int p, std::span<const long long> coefficients,
                                    double bias);
double residue_tvd_to_uniform(std::span<const double> residue_pmf);
void export_residues_csv(std::span<const double> residue_pmf, std::ostream& out);

// Binary entropy of Pr[0] = 1/2 + b, and its inverse on b >= 0.
double bias_entropy(double b);
double entropy_to_bias(double h);

}  // namespace shallow
