#pragma once

#include "shorlab/circuit.hpp"
#include "shorlab/metrics.hpp"
#include "shorlab/sim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace shorlab {

/// Qubits of `reg` touched by at least one gate, in register order.
std::vector<int> active_qubits(const Circuit& c, const std::vector<int>& reg);

/// Argument register in logical read-out order (reversed when declared).
std::vector<int> logical_argument_order(const Circuit& c);

struct ConditionalRow {
  std::string argument;       // logical argument label
  double probability = 0.0;   // P(argument)
  std::vector<double> distribution;  // over the active function qubits
  std::string best;           // most likely function label
  double best_probability = 0.0;
};

struct CircuitAnalysis {
  std::vector<int> argument_qubits;  // active, register order
  std::vector<int> function_qubits;  // active, register order
  std::vector<int> joint_qubits;     // argument_qubits then function_qubits
  std::vector<double> argument_distribution;  // logical labels over the full register
  DensityMatrix argument_state;
  DensityMatrix joint_state;        // empty above the density-matrix cap
  DensityMatrix ideal_joint_state;
  std::optional<LocalFrame> ghz_frame;  // when the joint state has three qubits
  MetricReport metrics;
  std::vector<ConditionalRow> conditional;
};

/// Simulates `c` under `noise` (density matrix) and noiselessly, then
/// evaluates the register states, metrics and conditional correlations.
CircuitAnalysis analyze_circuit(const Circuit& c, const NoiseModel& noise);

}  // namespace shorlab
