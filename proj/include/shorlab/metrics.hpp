#pragma once

#include "shorlab/errors.hpp"
#include "shorlab/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace shorlab {

namespace detail {

template <typename A, typename B>
void require_same_dimension(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != a.cols()) throw PreconditionError("density matrix is not square");
  if (a.rows() != b.rows()) {
    throw PreconditionError("dimension mismatch (" + std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + ")");
  }
}

}  // namespace detail

/// <psi|rho|psi> for a pure target.
template <typename DerivedR, typename DerivedV>
typename DerivedR::RealScalar fidelity_pure(const Eigen::MatrixBase<DerivedR>& rho,
                                            const Eigen::MatrixBase<DerivedV>& psi) {
  detail::require_same_dimension(rho, psi);
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

/// Squared-overlap fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. A
/// single-column `target` is treated as a pure state.
template <typename DerivedR, typename DerivedS>
typename DerivedR::RealScalar fidelity(const Eigen::MatrixBase<DerivedR>& rho,
                                       const Eigen::MatrixBase<DerivedS>& target) {
  using Real = typename DerivedR::RealScalar;
  if (target.cols() == 1) return fidelity_pure(rho, target);
  detail::require_same_dimension(rho, target);
  const auto sr = sqrtm_psd(rho);
  const ComplexMatrix<Real> inner = sr * target * sr;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(hermitian_part(inner), Eigen::EigenvaluesOnly);
  const Real t = es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt().sum();
  return std::min(Real(1), t * t);
}

template <typename Derived>
typename Derived::RealScalar purity(const Eigen::MatrixBase<Derived>& rho) {
  return (rho * rho).trace().real();
}

/// d (1 - Tr rho^2) / (d - 1): 0 for pure states, 1 for the maximally mixed state.
template <typename Derived>
typename Derived::RealScalar linear_entropy(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const Real d = static_cast<Real>(rho.rows());
  if (rho.rows() < 2) return Real(0);
  return std::clamp(d * (Real(1) - purity(rho)) / (d - Real(1)), Real(0), Real(1));
}

/// Two-qubit concurrence max(0, l1 - l2 - l3 - l4), with l_i the decreasing
/// eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)), rho~ = (Y x Y) rho* (Y x Y).
template <typename Derived>
typename Derived::RealScalar concurrence(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  using M = ComplexMatrix<Real>;
  if (rho.rows() != 4 || rho.cols() != 4) throw PreconditionError("concurrence needs a two-qubit density matrix");
  const M yy = kron(pauli<Real>('Y'), pauli<Real>('Y'));
  const M flipped = yy * rho.conjugate() * yy;
  const M sr = sqrtm_psd(rho);
  Eigen::SelfAdjointEigenSolver<M> es(hermitian_part(M(sr * flipped * sr)), Eigen::EigenvaluesOnly);
  Eigen::Matrix<Real, Eigen::Dynamic, 1> l = es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt();
  std::sort(l.data(), l.data() + l.size(), std::greater<Real>());
  return std::max(Real(0), l(0) - l(1) - l(2) - l(3));
}

template <typename Derived>
typename Derived::RealScalar tangle(const Eigen::MatrixBase<Derived>& rho) {
  const auto c = concurrence(rho);
  return c * c;
}

template <typename Scalar = double>
ComplexVector<Scalar> ghz_state(int qubits = 3) {
  ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(Eigen::Index{1} << qubits);
  v(0) = v(v.size() - 1) = std::complex<Scalar>(Scalar(1) / std::sqrt(Scalar(2)));
  return v;
}

template <typename Scalar = double>
ComplexVector<Scalar> bell_state() {
  return ghz_state<Scalar>(2);
}

/// Local frame given as one Pauli label per qubit (I, X, Y or Z); applying the
/// frame maps a locally rotated GHZ state onto (|000> + |111>)/sqrt(2).
using LocalFrame = std::array<char, 3>;

/// Frame of the ideal order-2 joint state (argument qubit, two flipped function
/// bits), which equals (|001> + |110>)/sqrt(2): a bit flip on the last qubit.
inline constexpr LocalFrame kOrderTwoGhzFrame{'I', 'I', 'X'};

/// Searches Pauli frames for the one mapping `psi` to GHZ with maximal overlap.
template <typename Derived>
LocalFrame ghz_local_frame(const Eigen::MatrixBase<Derived>& psi) {
  using Real = typename Derived::RealScalar;
  if (psi.size() != 8) throw PreconditionError("GHZ frame needs a three-qubit state");
  const std::array<char, 4> labels{'I', 'X', 'Y', 'Z'};
  const auto ghz = ghz_state<Real>(3);
  LocalFrame best{'I', 'I', 'I'};
  Real best_overlap = Real(-1);
  for (char a : labels) {
    for (char b : labels) {
      for (char c : labels) {
        const std::string s{a, b, c};
        const Real ov = std::norm((ghz.adjoint() * (pauli_string<Real>(s) * psi))(0, 0));
        if (ov > best_overlap + Real(1e-12)) {
          best_overlap = ov;
          best = {a, b, c};
        }
      }
    }
  }
  return best;
}

/// 1/2 - F_GHZ of the frame-corrected state.
template <typename Derived>
typename Derived::RealScalar ghz_witness(const Eigen::MatrixBase<Derived>& rho,
                                         const LocalFrame& frame = kOrderTwoGhzFrame) {
  using Real = typename Derived::RealScalar;
  if (rho.rows() != 8 || rho.cols() != 8) throw PreconditionError("GHZ witness needs a three-qubit density matrix");
  const auto u = pauli_string<Real>(std::string(frame.begin(), frame.end()));
  const ComplexMatrix<Real> rotated = u * rho * u.adjoint();
  return Real(0.5) - fidelity_pure(rotated, ghz_state<Real>(3));
}

/// Product of process fidelities of channels on disjoint qubits.
inline double product_rule_fidelity(const std::vector<double>& fidelities) {
  double p = 1.0;
  for (double f : fidelities) p *= f;
  return p;
}

/// Bures angle A = arccos(sqrt(F)), a metric on states, so angles of chained
/// gates add: F_total >= cos^2(min(pi/2, sum_i A_i)).
inline double chained_error_bound(const std::vector<double>& fidelities) {
  double angle = 0.0;
  for (double f : fidelities) {
    if (f < 0.0 || f > 1.0) throw PreconditionError("fidelities must lie in [0, 1]");
    angle += std::acos(std::sqrt(f));
  }
  angle = std::min(angle, std::numbers::pi / 2);
  const double c = std::cos(angle);
  return c * c;
}

struct MetricValue {
  double value = 0.0;
  std::optional<double> error;
};

struct PairTangle {
  int a = 0;
  int b = 0;
  MetricValue tangle;
};

struct MetricReport {
  std::optional<MetricValue> fidelity;
  std::optional<MetricValue> linear_entropy;
  std::optional<MetricValue> ghz_witness;
  std::vector<PairTangle> tangles;
};

}  // namespace shorlab
