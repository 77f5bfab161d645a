#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace shallow {

// Explicit finite distribution over m-bit strings. Keys use the global
// bit-order convention: bit 1 of the string is the most significant bit of
// the key, so ascending key order equals lexicographic bitstring order.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(int bit_length) : bit_length_(bit_length) {}

  int bit_length() const { return bit_length_; }

  void add(std::uint64_t key, double mass) {
    if (mass < 0.0) throw std::invalid_argument("Pmf: negative mass");
    if (bit_length_ < 64 && (key >> bit_length_) != 0)
      throw std::invalid_argument("Pmf: key outside support width");
    if (mass > 0.0) p_[key] += mass;
  }

  double prob(std::uint64_t key) const {
    auto it = p_.find(key);
    return it == p_.end() ? 0.0 : it->second;
  }

  double total_mass() const;
  std::size_t support_size() const { return p_.size(); }

  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

 private:
  int bit_length_ = 0;
  std::map<std::uint64_t, double> p_;
};

double total_variation(const Pmf& a, const Pmf& b);

std::string bitstring_of(std::uint64_t key, int bits);

// CSV: header "bitstring,probability", lexicographic rows, LF endings,
// probabilities at 17 significant digits. JSON: {"bit_length":m,"probs":{...}}.
void export_pmf_csv(const Pmf& pmf, std::ostream& out);
void export_pmf_json(const Pmf& pmf, std::ostream& out);
Pmf import_pmf_csv(std::istream& in, int bit_length);

}  // namespace shallow
