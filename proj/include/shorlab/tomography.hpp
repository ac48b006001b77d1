#pragma once

#include "shorlab/circuit.hpp"
#include "shorlab/linalg.hpp"
#include "shorlab/sim.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace shorlab {

/// All 3^k local Pauli measurement settings, e.g. "XX", "XY", ..., "ZZ".
std::vector<std::string> pauli_settings(int qubits);

/// U with outcome probabilities diag(U rho U^dagger); outcome bit 0 is the +1
/// eigenvector of the measured Pauli.
ComplexMatrix<double> measurement_rotation(const std::string& setting);

std::vector<double> setting_probabilities(const DensityMatrix& rho, const std::string& setting);

/// One record per Pauli setting. shots = 0 gives exact (infinite-shot) records.
std::vector<MeasurementRecord> simulate_state_tomography(const DensityMatrix& rho, std::uint64_t shots,
                                                         std::uint64_t seed);

struct MleOptions {
  double tolerance = 1e-10;  // on the per-iteration log-likelihood change
  int max_iterations = 10000;
};

struct StateReconstruction {
  DensityMatrix rho;
  int iterations = 0;
  double log_likelihood = 0.0;
};

/// Pauli-expectation inversion, not projected.
DensityMatrix linear_inversion_state(const std::vector<MeasurementRecord>& records);

/// Maximum-likelihood (R rho R) reconstruction started from the PSD projection
/// of the linear inversion. Throws PreconditionError for an incomplete setting
/// set and ConvergenceError at the iteration cap.
StateReconstruction reconstruct_state(const std::vector<MeasurementRecord>& records, const MleOptions& options = {});

using Channel = std::function<DensityMatrix(const DensityMatrix&)>;

Channel unitary_channel(const ComplexMatrix<double>& u);
/// Gates of `c` as noisy channels (sim-engine noise model).
Channel circuit_channel(const Circuit& c, const NoiseModel& noise);

/// Product input labels from {0, 1, +, i} (i = (|0> + i|1>)/sqrt 2).
std::vector<std::string> process_inputs(int qubits);
DensityMatrix input_state(const std::string& label);

struct ProcessRecord {
  std::string input;
  std::vector<MeasurementRecord> settings;
};

/// 4^k inputs x 3^k settings. Throws PreconditionError above two qubits.
std::vector<ProcessRecord> simulate_process_data(const Channel& channel, int qubits, std::uint64_t shots,
                                                 std::uint64_t seed);

/// Choi matrix J = sum_ij |i><j| (x) E(|i><j|), trace d.
ComplexMatrix<double> choi_matrix(const Channel& channel, int qubits);

struct ProcessReconstruction {
  ComplexMatrix<double> choi;
  ComplexMatrix<double> chi;
  int iterations = 0;
  double log_likelihood = 0.0;
};

/// Least-squares inversion projected to PSD, refined by the trace-preserving
/// maximum-likelihood iteration.
ProcessReconstruction reconstruct_process(const std::vector<ProcessRecord>& records, const MleOptions& options = {});

ProcessReconstruction simulate_process_tomography(const Channel& channel, int qubits, std::uint64_t shots,
                                                  std::uint64_t seed, const MleOptions& options = {});

/// E(rho) = Tr_in[(rho^T (x) I) J].
Channel channel_from_choi(const ComplexMatrix<double>& choi);

/// chi_mn = <<P_m|J|P_n>> / d^2 over Pauli strings in lexicographic IXYZ
/// order, normalized to unit trace.
ComplexMatrix<double> chi_from_choi(const ComplexMatrix<double>& choi);
ComplexMatrix<double> chi_of_unitary(const ComplexMatrix<double>& u);
ComplexMatrix<double> chi_of_channel(const Channel& channel, int qubits);

/// Tr(chi_ideal chi), both normalized to unit trace.
double process_fidelity(const ComplexMatrix<double>& chi_ideal, const ComplexMatrix<double>& chi);

struct BootstrapResult {
  double mean = 0.0;
  double stddev = 0.0;
  int resamples = 0;
};

/// Parametric bootstrap: resample counts from `fit`'s outcome probabilities
/// with the records' shot numbers, re-reconstruct, evaluate `metric`.
/// Requires at least 100 resamples and finite-shot records.
BootstrapResult bootstrap_state_metric(const DensityMatrix& fit, const std::vector<MeasurementRecord>& records,
                                       const std::function<double(const DensityMatrix&)>& metric, int resamples,
                                       std::uint64_t seed, const MleOptions& options = {});

/// Process analogue of bootstrap_state_metric, resampling from the fitted Choi matrix.
BootstrapResult bootstrap_process_metric(const ComplexMatrix<double>& choi, const std::vector<ProcessRecord>& records,
                                         const std::function<double(const ComplexMatrix<double>&)>& chi_metric,
                                         int resamples, std::uint64_t seed, const MleOptions& options = {});

}  // namespace shorlab
