#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shorlab {

enum class GateKind {
  H,
  X,
  T,
  CNOT,         // qubits = {control, target}
  CZ,           // qubits = {a, b}
  CR,           // qubits = {control, target}; controlled diag(1, exp(-2 pi i / 2^k))
  SWAP,         // qubits = {a, b}
  CSWAP,        // qubits = {control, a, b}
  ControlledU,  // qubits = {control, f_0, ..., f_{m-1}}; y -> C^(2^j) y mod N for y < N
  InverseQft,   // qubits = argument register; marker, expands to H and CR gates
};

std::string_view gate_name(GateKind kind);

struct ModularMultiplier {
  std::uint64_t base = 0;     // C
  std::uint64_t modulus = 0;  // N
  int power = 0;              // j, the gate multiplies by C^(2^j) mod N

  std::uint64_t factor() const;  // C^(2^j) mod N
  bool operator==(const ModularMultiplier&) const = default;
};

struct Gate {
  GateKind kind = GateKind::H;
  std::vector<int> qubits;
  int rotation = 0;                 // k for CR
  ModularMultiplier multiplier{};  // ControlledU only

  static Gate h(int q) { return {GateKind::H, {q}}; }
  static Gate x(int q) { return {GateKind::X, {q}}; }
  static Gate t(int q) { return {GateKind::T, {q}}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}}; }
  static Gate cr(int control, int target, int k) { return {GateKind::CR, {control, target}, k}; }
  static Gate swap(int a, int b) { return {GateKind::SWAP, {a, b}}; }
  static Gate cswap(int control, int a, int b) { return {GateKind::CSWAP, {control, a, b}}; }
  static Gate controlled_u(int control, const std::vector<int>& function_register,
                           ModularMultiplier mul);
  static Gate inverse_qft(const std::vector<int>& argument_register) {
    return {GateKind::InverseQft, argument_register};
  }

  /// Self-inverse gates (H, X, CNOT, CZ, SWAP, CSWAP).
  bool self_inverse() const;
  /// Acts as a permutation of computational basis states.
  bool classical() const;
  /// Entangling two-qubit gates realised by two-photon interference (CNOT, CZ, CR).
  bool interferometric() const;
  /// Same operator, allowing for qubit symmetries (CZ, SWAP, CSWAP pair).
  bool same_operator(const Gate& other) const;
  bool touches(int q) const;

  bool operator==(const Gate&) const = default;
};

struct Circuit {
  int width = 0;
  std::vector<int> argument_register;
  std::vector<int> function_register;
  /// Function register input basis value, read top rail first (y = 1 before
  /// log recoding, a = 0 after).
  std::uint64_t function_input = 1;
  std::vector<Gate> gates;
  bool measure_argument = false;
  bool reverse_argument = false;

  /// Throws PreconditionError on the first violated invariant.
  void validate() const;
  /// Basis index of |0...0>_arg |function_input>_func.
  std::uint64_t input_index() const;
  bool operator==(const Circuit&) const = default;
};

/// Columns of the no-swap inverse QFT in gate form; the final swap network is
/// deferred to the measurement (reversed argument order).
std::vector<Gate> inverse_qft_gates(const std::vector<int>& qubits);

/// Replaces every InverseQft marker by its gate expansion.
Circuit expand_markers(const Circuit& c);

/// Human-readable single-gate text in the circuit file syntax.
std::string to_string(const Gate& g);

}  // namespace shorlab
