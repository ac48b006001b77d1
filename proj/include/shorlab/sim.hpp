#pragma once

#include "shorlab/circuit.hpp"
#include "shorlab/gates.hpp"
#include "shorlab/linalg.hpp"
#include "shorlab/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shorlab {

inline constexpr double kDependentPairVisibility = 0.98;
inline constexpr double kIndependentPairVisibility = 0.85;
inline constexpr double kPrebiasedGateSuccess = 1.0 / 3.0;

/// Abstract photonic noise.
///
/// Each interferometric gate (CNOT, CZ, CR) is applied as
///   rho -> G [ V rho + (1 - V) D(rho) ] G^dagger,
/// where D removes every coherence between different values of the
/// (control, target) pair in the gate's interaction basis (computational for
/// CZ/CR, control Z and target X for CNOT). Every gate is then followed by
/// depolarisation of its qubits with probability `depolarizing_p`.
struct NoiseModel {
  double relative_visibility = 1.0;
  /// Per-interferometric-gate visibilities in circuit order; overrides
  /// `relative_visibility` where present.
  std::vector<double> gate_visibility;
  double depolarizing_p = 0.0;
  double gate_success = kPrebiasedGateSuccess;

  static NoiseModel off() { return {}; }
  static NoiseModel uniform(double visibility, double depolarizing = 0.0) {
    NoiseModel m;
    m.relative_visibility = visibility;
    m.depolarizing_p = depolarizing;
    return m;
  }

  double visibility(std::size_t ordinal) const {
    return ordinal < gate_visibility.size() ? gate_visibility[ordinal] : relative_visibility;
  }
  bool noiseless() const;
  /// Throws PreconditionError unless every parameter lies in [0, 1].
  void validate() const;
};

/// Visibilities for the two-source photonic layout: an interferometric gate
/// whose qubits were both untouched by earlier interferometric gates
/// interferes a dependent photon pair (V = 0.98); a gate reusing an already
/// interfered photon meets an independent photon (V = 0.85).
NoiseModel layout_noise(const Circuit& c);

StateVector run_pure(const Circuit& c, std::optional<std::uint64_t> input = std::nullopt,
                     const DenseLimits& limits = default_limits());
/// Simulates gates [0, end) only.
StateVector run_pure_prefix(const Circuit& c, std::size_t end, std::optional<std::uint64_t> input = std::nullopt,
                            const DenseLimits& limits = default_limits());

DensityMatrix run_density(const Circuit& c, const NoiseModel& noise,
                          std::optional<std::uint64_t> input = std::nullopt,
                          const DenseLimits& limits = default_limits());
DensityMatrix run_density_prefix(const Circuit& c, std::size_t end, const NoiseModel& noise,
                                 std::optional<std::uint64_t> input = std::nullopt,
                                 const DenseLimits& limits = default_limits());
/// Applies the gates of `c` as noisy channels to an arbitrary input state.
DensityMatrix apply_circuit(const Circuit& c, DensityMatrix rho, const NoiseModel& noise);

/// Single-gate channel; `visibility` applies when the gate is interferometric.
void apply_noisy_gate(DensityMatrix& rho, const Gate& g, int width, double visibility, double depolarizing_p);

/// Reduced state on `keep`, in the listed order. Throws on an empty or repeated set.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> partial_trace(const Eigen::MatrixBase<Derived>& rho,
                                                          const std::vector<int>& keep);

/// Reduced state of a pure state on `keep` without forming the full density matrix.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> reduced_density(const Eigen::MatrixBase<Derived>& psi,
                                                            const std::vector<int>& keep);

/// Index of the traced-out complement of `keep` among `width` qubits.
std::vector<int> complement_of(const std::vector<int>& keep, int width);

/// Born probabilities of `reg` read out as a label: label bit order is the
/// register order, or reversed when `reversed` is set (first label bit = last
/// register qubit).
std::vector<double> register_probabilities(const DensityMatrix& rho, const std::vector<int>& reg, bool reversed);
std::vector<double> register_probabilities(const StateVector& psi, const std::vector<int>& reg, bool reversed);

std::string outcome_label(std::size_t index, int bits);

struct MeasurementRecord {
  std::string basis;                  // one of X/Y/Z per measured qubit
  std::vector<std::uint64_t> counts;  // indexed by outcome label value
  std::uint64_t shots = 0;
  std::vector<double> exact;          // infinite-shot probabilities; counts empty

  bool is_exact() const { return !exact.empty(); }
  std::vector<double> frequencies() const;
};

std::vector<std::uint64_t> sample_counts(const std::vector<double>& probabilities, std::uint64_t shots,
                                         Rng& rng);

/// Logical measurement of the circuit's argument register (with its declared
/// order reversal) on a simulated output state.
MeasurementRecord measure_logical(const DensityMatrix& rho, const std::vector<int>& reg, bool reversed,
                                  std::uint64_t shots, std::uint64_t seed);
MeasurementRecord measure_logical(const StateVector& psi, const std::vector<int>& reg, bool reversed,
                                  std::uint64_t shots, std::uint64_t seed);

/// Distribution of `function_qubits` (register order, top first) conditioned on
/// `argument_qubits` holding value x (register order, top first).
/// Throws PreconditionError when P(x) = 0.
std::vector<double> conditional_function_distribution(const DensityMatrix& rho,
                                                      const std::vector<int>& argument_qubits,
                                                      const std::vector<int>& function_qubits, std::uint64_t x);

/// Product of per-gate post-selection success probabilities: `gate_success`
/// for each two-qubit interferometric gate, gate_success^(q-1) for any other
/// gate coupling q >= 3 qubits, 1 for single-qubit gates and SWAP relabelings.
double postselection_yield(const Circuit& c, const NoiseModel& noise);

// ---------------------------------------------------------------------------

template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> partial_trace(const Eigen::MatrixBase<Derived>& rho,
                                                          const std::vector<int>& keep) {
  using M = ComplexMatrix<typename Derived::RealScalar>;
  const int width = qubits_for_dimension(rho.rows());
  if (keep.empty()) throw PreconditionError("partial trace needs a nonempty keep set");
  std::vector<bool> used(width, false);
  for (int q : keep) {
    if (q < 0 || q >= width || used[q]) throw PreconditionError("partial trace keep set is invalid");
    used[q] = true;
  }
  const auto traced = complement_of(keep, width);
  const int k = static_cast<int>(keep.size());
  const int t = static_cast<int>(traced.size());
  const Eigen::Index kd = Eigen::Index{1} << k;
  const Eigen::Index td = Eigen::Index{1} << t;
  auto spread = [width](const std::vector<int>& qs, Eigen::Index value) {
    const int nb = static_cast<int>(qs.size());
    Eigen::Index idx = 0;
    for (int b = 0; b < nb; ++b) {
      if ((value >> (nb - 1 - b)) & 1) idx |= Eigen::Index{1} << bit_position(qs[b], width);
    }
    return idx;
  };
  std::vector<Eigen::Index> keep_off(kd), trace_off(td);
  for (Eigen::Index a = 0; a < kd; ++a) keep_off[a] = spread(keep, a);
  for (Eigen::Index s = 0; s < td; ++s) trace_off[s] = spread(traced, s);
  M out = M::Zero(kd, kd);
  for (Eigen::Index a = 0; a < kd; ++a) {
    for (Eigen::Index b = 0; b < kd; ++b) {
      typename M::Scalar acc(0);
      for (Eigen::Index s = 0; s < td; ++s) acc += rho(keep_off[a] + trace_off[s], keep_off[b] + trace_off[s]);
      out(a, b) = acc;
    }
  }
  return out;
}

template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> reduced_density(const Eigen::MatrixBase<Derived>& psi,
                                                            const std::vector<int>& keep) {
  using M = ComplexMatrix<typename Derived::RealScalar>;
  const int width = qubits_for_dimension(psi.size());
  const auto traced = complement_of(keep, width);
  const int k = static_cast<int>(keep.size());
  const int t = static_cast<int>(traced.size());
  M amps = M::Zero(Eigen::Index{1} << k, Eigen::Index{1} << t);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    Eigen::Index a = 0, s = 0;
    for (int b = 0; b < k; ++b) a = (a << 1) | (bit_of(static_cast<std::size_t>(i), keep[b], width) ? 1 : 0);
    for (int b = 0; b < t; ++b) s = (s << 1) | (bit_of(static_cast<std::size_t>(i), traced[b], width) ? 1 : 0);
    amps(a, s) = psi(i);
  }
  return amps * amps.adjoint();
}

}  // namespace shorlab
