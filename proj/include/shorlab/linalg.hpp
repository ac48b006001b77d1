#pragma once

// Dense complex linear algebra shared by the simulator and the analysis code.
//
// Qubit order convention: qubit 0 is the top rail and the most significant
// bit of a basis index, so for a k-qubit register the basis index is
//   x = sum_i b_i 2^(k-1-i).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace shorlab {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using StateVector = ComplexVector<double>;
using DensityMatrix = ComplexMatrix<double>;
using Complex = std::complex<double>;

/// Bit position (from the least significant end) of `qubit` in a `width`-qubit index.
constexpr int bit_position(int qubit, int width) { return width - 1 - qubit; }

constexpr bool bit_of(std::size_t index, int qubit, int width) {
  return (index >> bit_position(qubit, width)) & 1U;
}

inline int qubits_for_dimension(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension is not a power of two");
  }
  int k = 0;
  while ((Eigen::Index{1} << k) < dim) ++k;
  return k;
}

template <typename Scalar = double>
ComplexMatrix<Scalar> pauli(char which) {
  using C = std::complex<Scalar>;
  ComplexMatrix<Scalar> m(2, 2);
  switch (which) {
    case 'I': m << C(1), C(0), C(0), C(1); break;
    case 'X': m << C(0), C(1), C(1), C(0); break;
    case 'Y': m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 'Z': m << C(1), C(0), C(0), C(-1); break;
    default: throw std::invalid_argument("unknown Pauli label");
  }
  return m;
}

template <typename DerivedA, typename DerivedB>
ComplexMatrix<typename DerivedA::RealScalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                                  const Eigen::MatrixBase<DerivedB>& b) {
  ComplexMatrix<typename DerivedA::RealScalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Tensor product of a list of factors, first factor on the top rails.
template <typename Scalar>
ComplexMatrix<Scalar> kron_all(const std::vector<ComplexMatrix<Scalar>>& factors) {
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

/// Pauli string operator, e.g. "XZ" = X on qubit 0, Z on qubit 1.
template <typename Scalar = double>
ComplexMatrix<Scalar> pauli_string(const std::string& labels) {
  std::vector<ComplexMatrix<Scalar>> f;
  f.reserve(labels.size());
  for (char c : labels) f.push_back(pauli<Scalar>(c));
  return kron_all(f);
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Max-norm distance of U^dagger U from the identity.
template <typename Derived>
typename Derived::RealScalar unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using M = ComplexMatrix<typename Derived::RealScalar>;
  M prod = u.adjoint() * u;
  return (prod - M::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()) / typename Derived::RealScalar(2);
}

template <typename Derived>
typename Derived::RealScalar min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using M = ComplexMatrix<typename Derived::RealScalar>;
  Eigen::SelfAdjointEigenSolver<M> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Square root of a positive semidefinite matrix; negative eigenvalues are clipped.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> sqrtm_psd(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  using M = ComplexMatrix<Real>;
  Eigen::SelfAdjointEigenSolver<M> es(hermitian_part(m));
  auto evals = es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt();
  return es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().adjoint();
}

/// Closest (Frobenius) positive semidefinite matrix of the given trace.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> project_psd(const Eigen::MatrixBase<Derived>& m,
                                                        typename Derived::RealScalar trace) {
  using Real = typename Derived::RealScalar;
  using M = ComplexMatrix<Real>;
  Eigen::SelfAdjointEigenSolver<M> es(hermitian_part(m));
  auto evals = es.eigenvalues().cwiseMax(Real(0)).eval();
  const Real sum = evals.sum();
  if (sum <= Real(0)) return M::Identity(m.rows(), m.cols()) * (trace / Real(m.rows()));
  evals *= trace / sum;
  return es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> outer(const Eigen::MatrixBase<Derived>& psi) {
  return psi * psi.adjoint();
}

template <typename Scalar = double>
ComplexVector<Scalar> basis_state(int qubits, std::size_t index) {
  ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(Eigen::Index{1} << qubits);
  v(static_cast<Eigen::Index>(index)) = std::complex<Scalar>(1);
  return v;
}

struct DensityCheck {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok = false;
};

/// Hermitian to `herm_tol`, unit trace to `trace_tol`, eigenvalues above -psd_tol.
template <typename Derived>
DensityCheck check_density(const Eigen::MatrixBase<Derived>& rho, double herm_tol = 1e-10,
                           double trace_tol = 1e-10, double psd_tol = 1e-8) {
  DensityCheck c;
  c.hermiticity = static_cast<double>(hermiticity_defect(rho));
  c.trace_error = std::abs(static_cast<double>(rho.trace().real()) - 1.0) +
                  std::abs(static_cast<double>(rho.trace().imag()));
  c.min_eigenvalue = static_cast<double>(min_eigenvalue(rho));
  c.ok = c.hermiticity < herm_tol && c.trace_error < trace_tol && c.min_eigenvalue > -psd_tol;
  return c;
}

}  // namespace shorlab
