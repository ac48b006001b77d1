#include "shorlab/circuit.hpp"

#include "shorlab/errors.hpp"
#include "shorlab/number_theory.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace shorlab {

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::T: return "t";
    case GateKind::CNOT: return "cnot";
    case GateKind::CZ: return "cz";
    case GateKind::CR: return "cr";
    case GateKind::SWAP: return "swap";
    case GateKind::CSWAP: return "cswap";
    case GateKind::ControlledU: return "cu";
    case GateKind::InverseQft: return "iqft";
  }
  return "?";
}

std::uint64_t ModularMultiplier::factor() const {
  return pow_mod(base, std::uint64_t{1} << power, modulus);
}

Gate Gate::controlled_u(int control, const std::vector<int>& function_register,
                        ModularMultiplier mul) {
  Gate g{GateKind::ControlledU, {control}};
  g.qubits.insert(g.qubits.end(), function_register.begin(), function_register.end());
  g.multiplier = mul;
  return g;
}

bool Gate::self_inverse() const {
  switch (kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::CSWAP: return true;
    default: return false;
  }
}

bool Gate::classical() const {
  switch (kind) {
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::SWAP:
    case GateKind::CSWAP:
    case GateKind::ControlledU: return true;
    default: return false;
  }
}

bool Gate::interferometric() const {
  return kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::CR;
}

bool Gate::same_operator(const Gate& other) const {
  if (kind != other.kind) return false;
  if (*this == other) return true;
  switch (kind) {
    case GateKind::CZ:
    case GateKind::SWAP:
      return qubits[0] == other.qubits[1] && qubits[1] == other.qubits[0];
    case GateKind::CSWAP:
      return qubits[0] == other.qubits[0] && qubits[1] == other.qubits[2] &&
             qubits[2] == other.qubits[1];
    default: return false;
  }
}

bool Gate::touches(int q) const {
  return std::find(qubits.begin(), qubits.end(), q) != qubits.end();
}

namespace {

std::size_t expected_arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::T: return 1;
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CR:
    case GateKind::SWAP: return 2;
    case GateKind::CSWAP: return 3;
    default: return 0;
  }
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

}  // namespace

void Circuit::validate() const {
  if (width < 1) throw PreconditionError("circuit width must be positive");
  if (argument_register.empty()) throw PreconditionError("argument register is empty");
  if (function_register.empty()) throw PreconditionError("function register is empty");
  if (reverse_argument && !measure_argument) throw PreconditionError("argument reversal requires measurement");
  std::set<int> seen;
  for (const auto* reg : {&argument_register, &function_register}) {
    for (int q : *reg) {
      if (q < 0 || q >= width) {
        throw PreconditionError("register qubit " + std::to_string(q) + " out of range");
      }
      if (!seen.insert(q).second) throw PreconditionError("register overlap at qubit " + std::to_string(q));
    }
  }
  if (function_register.size() < 64 && (function_input >> function_register.size()) != 0) {
    throw PreconditionError("function input does not fit the function register");
  }
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    const std::string where = "gate " + std::to_string(i) + " (" + std::string(gate_name(g.kind)) + ")";
    const std::size_t arity = expected_arity(g.kind);
    if (arity != 0 && g.qubits.size() != arity) throw PreconditionError(where + ": wrong qubit count");
    if (g.qubits.empty()) throw PreconditionError(where + ": no qubits");
    std::set<int> distinct;
    for (int q : g.qubits) {
      if (q < 0 || q >= width) throw PreconditionError(where + ": qubit " + std::to_string(q) + " out of range");
      if (!distinct.insert(q).second) {
        throw PreconditionError(where + (g.qubits.size() == 2 ? ": identical control/target"
                                                              : ": repeated qubit"));
      }
    }
    if (g.kind == GateKind::CR && g.rotation < 1) throw PreconditionError(where + ": rotation k must be >= 1");
    if (g.kind == GateKind::ControlledU) {
      const auto& m = g.multiplier;
      if (g.qubits.size() < 2) throw PreconditionError(where + ": missing function register");
      if (m.modulus < 2 || m.base < 1 || m.base >= m.modulus || gcd(m.base, m.modulus) != 1) {
        throw PreconditionError(where + ": multiplier base must be co-prime to N");
      }
      if (m.power < 0 || m.power > 62) throw PreconditionError(where + ": power j out of range");
      const std::size_t m_bits = g.qubits.size() - 1;
      if (m_bits < 64 && (m.modulus - 1) >> m_bits != 0) {
        throw PreconditionError(where + ": function register too narrow for N");
      }
    }
  }
}

std::uint64_t Circuit::input_index() const {
  std::uint64_t idx = 0;
  const int m = static_cast<int>(function_register.size());
  for (int t = 0; t < m; ++t) {
    if ((function_input >> (m - 1 - t)) & 1U) {
      idx |= std::uint64_t{1} << (width - 1 - function_register[t]);
    }
  }
  return idx;
}

std::vector<Gate> inverse_qft_gates(const std::vector<int>& qubits) {
  std::vector<Gate> out;
  const int n = static_cast<int>(qubits.size());
  for (int t = 0; t < n; ++t) {
    for (int c = 0; c < t; ++c) out.push_back(Gate::cr(qubits[c], qubits[t], t - c + 1));
    out.push_back(Gate::h(qubits[t]));
  }
  return out;
}

Circuit expand_markers(const Circuit& c) {
  Circuit out = c;
  out.gates.clear();
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::InverseQft) {
      auto expanded = inverse_qft_gates(g.qubits);
      out.gates.insert(out.gates.end(), expanded.begin(), expanded.end());
    } else {
      out.gates.push_back(g);
    }
  }
  return out;
}

std::string to_string(const Gate& g) {
  std::ostringstream os;
  os << gate_name(g.kind);
  switch (g.kind) {
    case GateKind::ControlledU:
      os << " c=" << g.multiplier.base << " n=" << g.multiplier.modulus << " j=" << g.multiplier.power
         << " ctrl=" << g.qubits[0]
         << " func=" << join(std::vector<int>(g.qubits.begin() + 1, g.qubits.end()));
      break;
    case GateKind::InverseQft: os << ' ' << join(g.qubits); break;
    default:
      for (int q : g.qubits) os << ' ' << q;
      if (g.kind == GateKind::CR) os << ' ' << g.rotation;
  }
  return os.str();
}

}  // namespace shorlab
