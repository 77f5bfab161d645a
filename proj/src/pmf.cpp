#include "shallow/pmf.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>

namespace shallow {

double Pmf::total_mass() const {
  double s = 0.0;
  for (const auto& [k, v] : p_) s += v;
  return s;
}

double total_variation(const Pmf& a, const Pmf& b) {
  if (a.bit_length() != b.bit_length())
    throw std::invalid_argument("total_variation: bit length mismatch");
  double s = 0.0;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      s += ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      s += ib->second;
      ++ib;
    } else {
      s += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * s;
}

std::string bitstring_of(std::uint64_t key, int bits) {
  std::string s(static_cast<size_t>(bits), '0');
  for (int i = 0; i < bits; ++i)
    if ((key >> (bits - 1 - i)) & 1u) s[static_cast<size_t>(i)] = '1';
  return s;
}

void export_pmf_csv(const Pmf& pmf, std::ostream& out) {
  out << "bitstring,probability\n";
  char buf[64];
  for (const auto& [k, v] : pmf) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << bitstring_of(k, pmf.bit_length()) << ',' << buf << '\n';
  }
}

void export_pmf_json(const Pmf& pmf, std::ostream& out) {
  out << "{\"bit_length\":" << pmf.bit_length() << ",\"probs\":{";
  bool first = true;
  char buf[64];
  for (const auto& [k, v] : pmf) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) out << ',';
    first = false;
    out << '"' << bitstring_of(k, pmf.bit_length()) << "\":" << buf;
  }
  out << "}}\n";
}

Pmf import_pmf_csv(std::istream& in, int bit_length) {
  Pmf pmf(bit_length);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("pmf csv: bad row");
    std::uint64_t key = 0;
    for (size_t i = 0; i < comma; ++i) key = (key << 1) | (line[i] == '1' ? 1u : 0u);
    pmf.add(key, std::strtod(line.c_str() + comma + 1, nullptr));
  }
  return pmf;
}

}  // namespace shallow
