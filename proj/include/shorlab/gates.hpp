#pragma once

#include "shorlab/circuit.hpp"
#include "shorlab/errors.hpp"
#include "shorlab/linalg.hpp"
#include "shorlab/number_theory.hpp"

#include <numbers>
#include <span>
#include <vector>

namespace shorlab {

/// Dense-size limits. Unitaries are 4^w entries, so they get a tighter cap
/// than state vectors.
struct DenseLimits {
  int state_qubits = 14;
  int density_qubits = 10;
  int unitary_qubits = 10;
};

inline DenseLimits& default_limits() {
  static DenseLimits limits;
  return limits;
}

/// Local matrix of `g` over g.qubits; g.qubits[0] is the most significant local bit.
template <typename Scalar = double>
ComplexMatrix<Scalar> gate_matrix(const Gate& g) {
  using C = std::complex<Scalar>;
  using M = ComplexMatrix<Scalar>;
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  switch (g.kind) {
    case GateKind::H: {
      M m(2, 2);
      m << C(s), C(s), C(s), C(-s);
      return m;
    }
    case GateKind::X: return pauli<Scalar>('X');
    case GateKind::T: {
      M m = M::Identity(2, 2);
      m(1, 1) = std::polar(Scalar(1), std::numbers::pi_v<Scalar> / Scalar(4));
      return m;
    }
    case GateKind::CNOT: {
      M m = M::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = C(1);
      return m;
    }
    case GateKind::CZ: {
      M m = M::Identity(4, 4);
      m(3, 3) = C(-1);
      return m;
    }
    case GateKind::CR: {
      M m = M::Identity(4, 4);
      m(3, 3) = std::polar(Scalar(1), -Scalar(2) * std::numbers::pi_v<Scalar> /
                                          std::ldexp(Scalar(1), g.rotation));
      return m;
    }
    case GateKind::SWAP: {
      M m = M::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = C(1);
      return m;
    }
    case GateKind::CSWAP: {
      M m = M::Identity(8, 8);
      m(5, 5) = m(6, 6) = C(0);
      m(5, 6) = m(6, 5) = C(1);
      return m;
    }
    case GateKind::ControlledU: {
      const int m_bits = static_cast<int>(g.qubits.size()) - 1;
      const Eigen::Index half = Eigen::Index{1} << m_bits;
      const std::uint64_t n = g.multiplier.modulus;
      const std::uint64_t f = g.multiplier.factor();
      M m = M::Zero(2 * half, 2 * half);
      for (Eigen::Index y = 0; y < half; ++y) {
        m(y, y) = C(1);
        const auto uy = static_cast<std::uint64_t>(y);
        const Eigen::Index out = uy < n ? static_cast<Eigen::Index>(mul_mod(f, uy, n)) : y;
        m(half + out, half + y) = C(1);
      }
      return m;
    }
    case GateKind::InverseQft: break;
  }
  throw PreconditionError("inverse-QFT marker has no local matrix; expand it first");
}

/// m <- (g acting on `qubits`) * m, where m has 2^width rows.
template <typename Derived, typename Scalar>
void apply_local(Eigen::MatrixBase<Derived>& m, const ComplexMatrix<Scalar>& g,
                 std::span<const int> qubits, int width) {
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index local = Eigen::Index{1} << k;
  std::vector<Eigen::Index> offsets(local, 0);
  std::size_t mask = 0;
  for (int b = 0; b < k; ++b) mask |= std::size_t{1} << bit_position(qubits[b], width);
  for (Eigen::Index l = 0; l < local; ++l) {
    Eigen::Index off = 0;
    for (int b = 0; b < k; ++b) {
      if ((l >> (k - 1 - b)) & 1) off |= Eigen::Index{1} << bit_position(qubits[b], width);
    }
    offsets[l] = off;
  }
  const std::size_t dim = std::size_t{1} << width;
  ComplexMatrix<Scalar> block(local, m.cols());
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (Eigen::Index l = 0; l < local; ++l) block.row(l) = m.row(static_cast<Eigen::Index>(base) + offsets[l]);
    block = (g * block).eval();
    for (Eigen::Index l = 0; l < local; ++l) m.row(static_cast<Eigen::Index>(base) + offsets[l]) = block.row(l);
  }
}

template <typename Derived>
void apply_gate(Eigen::MatrixBase<Derived>& m, const Gate& g, int width) {
  using Scalar = typename Derived::RealScalar;
  if (g.kind == GateKind::InverseQft) {
    for (const Gate& e : inverse_qft_gates(g.qubits)) apply_gate(m, e, width);
    return;
  }
  apply_local(m, gate_matrix<Scalar>(g), std::span<const int>(g.qubits), width);
}

/// Product of all gate matrices in order. Throws PreconditionError above the unitary cap.
template <typename Scalar = double>
ComplexMatrix<Scalar> circuit_unitary(const Circuit& c, const DenseLimits& limits = default_limits()) {
  if (c.width > limits.unitary_qubits) {
    throw PreconditionError("circuit width " + std::to_string(c.width) + " exceeds the unitary cap of " +
                            std::to_string(limits.unitary_qubits) + " qubits");
  }
  ComplexMatrix<Scalar> u = ComplexMatrix<Scalar>::Identity(Eigen::Index{1} << c.width, Eigen::Index{1} << c.width);
  for (const Gate& g : c.gates) apply_gate(u, g, c.width);
  return u;
}

}  // namespace shorlab
