#include "shallow/gates.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace shallow {

namespace {

CMat xrot_mat(double theta) {
  CMat m(2);
  m.at(0, 0) = std::cos(theta);
  m.at(0, 1) = cx(0.0, std::sin(theta));
  m.at(1, 0) = cx(0.0, std::sin(theta));
  m.at(1, 1) = std::cos(theta);
  return m;
}

}  // namespace

LinearOp x_rotation(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("x_rotation: theta not finite");
  return make_op(xrot_mat(theta));
}

LinearOp a_theta(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("a_theta: theta not finite");
  CMat m(2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = cx(0.0, -std::sin(theta));
  m.at(1, 1) = std::cos(theta);
  return make_op(std::move(m));
}

LinearOp a_multi(int m, double theta) {
  if (m < 1 || m > 6) throw std::invalid_argument("a_multi: m out of range");
  if (!std::isfinite(theta)) throw std::invalid_argument("a_multi: theta not finite");
  const int dim = 1 << m;
  CMat mat(dim);
  const CMat rot = xrot_mat(-theta);
  for (int x = 0; x < dim; ++x) {
    // column x: qubit j carries |x_j> rotated iff x_{j-1} = 1 (cyclic)
    std::vector<cx> col = {1.0};
    for (int j = 0; j < m; ++j) {
      const int bit_j = (x >> (m - 1 - j)) & 1;
      const int ctrl = (x >> (m - 1 - ((j - 1 + m) % m))) & 1;
      std::vector<cx> next(col.size() * 2);
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (ctrl) {
          next[2 * i] += col[i] * rot.at(0, bit_j);
          next[2 * i + 1] += col[i] * rot.at(1, bit_j);
        } else {
          next[2 * i + bit_j] = col[i];
        }
      }
      col = std::move(next);
    }
    for (int r = 0; r < dim; ++r) mat.at(r, x) = col[static_cast<std::size_t>(r)];
  }
  return make_op(std::move(mat));
}

LinearOp u_unitarized(int m, double theta) {
  if (m < 2 || m > 6) throw std::invalid_argument("u_unitarized: m must be in [2, 6]");
  const double s2m = std::pow(std::abs(std::sin(theta)), 2 * m);
  if (1.0 - s2m <= 1e-12)
    throw std::invalid_argument("u_unitarized: degenerate renormalizer at this theta");
  const LinearOp a = a_multi(m, theta);
  const int dim = 1 << m;
  const CMat gram = adjoint(a.matrix) * a.matrix;
  CMat u(dim);
  for (int x = 0; x < dim; ++x) {
    const int xbar = ~x & (dim - 1);
    if ((x >> (m - 1) & 1) == 0) {
      for (int r = 0; r < dim; ++r) u.at(r, x) = a.matrix.at(r, x);
    } else {
      const cx overlap = gram.at(xbar, x);
      const double c = std::sqrt(1.0 - std::norm(overlap));
      for (int r = 0; r < dim; ++r)
        u.at(r, x) = (a.matrix.at(r, x) - overlap * a.matrix.at(r, xbar)) / c;
    }
  }
  LinearOp op = make_op(std::move(u));
  if (!op.unitary) throw std::logic_error("u_unitarized: construction failed unitarity");
  return op;
}

LinearOp cyclic_shift(int m) {
  if (m < 2 || m > 6) throw std::invalid_argument("cyclic_shift: m must be in [2, 6]");
  const int dim = 1 << m;
  CMat mat(dim);
  for (int x = 0; x < dim; ++x) {
    const int y = ((x << 1) | (x >> (m - 1))) & (dim - 1);
    mat.at(y, x) = 1.0;
  }
  return make_op(std::move(mat));
}

LinearOp standard_gate(std::string_view name) {
  if (name == "H") {
    CMat m(2);
    const double r = 1.0 / std::sqrt(2.0);
    m.at(0, 0) = r; m.at(0, 1) = r; m.at(1, 0) = r; m.at(1, 1) = -r;
    return make_op(std::move(m));
  }
  if (name == "X") {
    CMat m(2);
    m.at(0, 1) = 1.0; m.at(1, 0) = 1.0;
    return make_op(std::move(m));
  }
  if (name == "Z") {
    CMat m(2);
    m.at(0, 0) = 1.0; m.at(1, 1) = -1.0;
    return make_op(std::move(m));
  }
  if (name == "CNOT") {
    CMat m(4);
    m.at(0, 0) = 1.0; m.at(1, 1) = 1.0; m.at(2, 3) = 1.0; m.at(3, 2) = 1.0;
    return make_op(std::move(m));
  }
  if (name == "BELL") {
    LinearOp h = standard_gate("H");
    LinearOp cnot = standard_gate("CNOT");
    return make_op(cnot.matrix * kron(h.matrix, CMat::identity(2)));
  }
  throw std::invalid_argument("standard_gate: unknown name '" + std::string(name) + "'");
}

LinearOp realize(const GateSpec& spec) {
  switch (spec.family) {
    case GateFamily::A_THETA: return a_theta(spec.theta);
    case GateFamily::A_MULTI: return a_multi(spec.m, spec.theta);
    case GateFamily::U_UNITARIZED: return u_unitarized(spec.m, spec.theta);
    case GateFamily::XROT: return x_rotation(spec.theta);
    case GateFamily::CYCLIC: return cyclic_shift(spec.m);
    case GateFamily::STANDARD:
      if (spec.name == "CUSTOM1Q") {
        if (spec.raw.size() != 4) throw std::invalid_argument("CUSTOM1Q: need 4 entries");
        CMat m(2);
        m.at(0, 0) = spec.raw[0]; m.at(0, 1) = spec.raw[1];
        m.at(1, 0) = spec.raw[2]; m.at(1, 1) = spec.raw[3];
        return make_op(std::move(m));
      }
      return standard_gate(spec.name);
  }
  throw std::logic_error("realize: bad family");
}

LinearOp realize(const GateSpec& spec, bool adjoint_flag) {
  LinearOp op = realize(spec);
  if (adjoint_flag) op.matrix = adjoint(op.matrix);
  return op;
}

GateSpec spec_a_theta(double theta) { return {GateFamily::A_THETA, 1, theta, "", {}}; }
GateSpec spec_a_multi(int m, double theta) { return {GateFamily::A_MULTI, m, theta, "", {}}; }
GateSpec spec_u_unitarized(int m, double theta) {
  return {GateFamily::U_UNITARIZED, m, theta, "", {}};
}
GateSpec spec_x_rotation(double theta) { return {GateFamily::XROT, 1, theta, "", {}}; }
GateSpec spec_cyclic_shift(int m) { return {GateFamily::CYCLIC, m, 0.0, "", {}}; }
GateSpec spec_standard(std::string_view name) {
  GateSpec s;
  s.family = GateFamily::STANDARD;
  s.name = std::string(name);
  s.m = (name == "CNOT" || name == "BELL") ? 2 : 1;
  return s;
}
GateSpec spec_custom_1q(const CMat& u) {
  GateSpec s;
  s.family = GateFamily::STANDARD;
  s.name = "CUSTOM1Q";
  s.m = 1;
  s.raw = {u.at(0, 0), u.at(0, 1), u.at(1, 0), u.at(1, 1)};
  return s;
}

namespace {

const char* family_name(GateFamily f) {
  switch (f) {
    case GateFamily::A_THETA: return "A_THETA";
    case GateFamily::A_MULTI: return "A_MULTI";
    case GateFamily::U_UNITARIZED: return "U_UNITARIZED";
    case GateFamily::XROT: return "XROT";
    case GateFamily::CYCLIC: return "CYCLIC";
    case GateFamily::STANDARD: return "STANDARD";
  }
  return "?";
}

GateFamily family_from_name(const std::string& s) {
  if (s == "A_THETA") return GateFamily::A_THETA;
  if (s == "A_MULTI") return GateFamily::A_MULTI;
  if (s == "U_UNITARIZED") return GateFamily::U_UNITARIZED;
  if (s == "XROT") return GateFamily::XROT;
  if (s == "CYCLIC") return GateFamily::CYCLIC;
  if (s == "STANDARD") return GateFamily::STANDARD;
  throw std::invalid_argument("unknown gate family: " + s);
}

}  // namespace

std::string GateSpec::to_json() const {
  nlohmann::json j;
  j["family"] = family_name(family);
  j["m"] = m;
  j["theta"] = theta;
  j["name"] = name;
  if (!raw.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const cx& v : raw) arr.push_back({v.real(), v.imag()});
    j["matrix"] = arr;
  }
  return j.dump();
}

GateSpec GateSpec::from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GateSpec s;
  s.family = family_from_name(j.at("family").get<std::string>());
  s.m = j.at("m").get<int>();
  s.theta = j.at("theta").get<double>();
  s.name = j.at("name").get<std::string>();
  if (j.contains("matrix"))
    for (const auto& e : j["matrix"]) s.raw.emplace_back(e[0].get<double>(), e[1].get<double>());
  return s;
}

}  // namespace shallow
