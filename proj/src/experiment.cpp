#include "shorlab/experiment.hpp"

#include <algorithm>

namespace shorlab {

std::vector<int> active_qubits(const Circuit& c, const std::vector<int>& reg) {
  std::vector<int> out;
  for (int q : reg) {
    if (std::any_of(c.gates.begin(), c.gates.end(), [q](const Gate& g) { return g.touches(q); })) out.push_back(q);
  }
  return out;
}

std::vector<int> logical_argument_order(const Circuit& c) {
  std::vector<int> order = c.argument_register;
  if (c.reverse_argument) std::reverse(order.begin(), order.end());
  return order;
}

CircuitAnalysis analyze_circuit(const Circuit& c, const NoiseModel& noise) {
  CircuitAnalysis a;
  a.argument_qubits = active_qubits(c, c.argument_register);
  a.function_qubits = active_qubits(c, c.function_register);
  if (a.argument_qubits.empty()) a.argument_qubits = c.argument_register;
  if (a.function_qubits.empty()) a.function_qubits = c.function_register;
  a.joint_qubits = a.argument_qubits;
  a.joint_qubits.insert(a.joint_qubits.end(), a.function_qubits.begin(), a.function_qubits.end());

  const StateVector ideal = run_pure(c);
  const auto order = logical_argument_order(c);
  std::vector<int> readout = order;
  readout.insert(readout.end(), a.function_qubits.begin(), a.function_qubits.end());
  std::vector<double> joint_probs;
  const bool small_joint = static_cast<int>(a.joint_qubits.size()) <= default_limits().density_qubits;
  if (small_joint) a.ideal_joint_state = reduced_density(ideal, a.joint_qubits);
  if (noise.noiseless()) {
    // Reduced states straight from the amplitudes; no full density matrix.
    a.argument_distribution = register_probabilities(ideal, c.argument_register, c.reverse_argument);
    a.argument_state = reduced_density(ideal, a.argument_qubits);
    a.joint_state = a.ideal_joint_state;
    joint_probs = register_probabilities(ideal, readout, false);
  } else {
    const DensityMatrix rho = run_density(c, noise);
    a.argument_distribution = register_probabilities(rho, c.argument_register, c.reverse_argument);
    a.argument_state = partial_trace(rho, a.argument_qubits);
    if (small_joint) a.joint_state = partial_trace(rho, a.joint_qubits);
    joint_probs = register_probabilities(rho, readout, false);
  }

  a.metrics.linear_entropy = MetricValue{linear_entropy(a.argument_state), std::nullopt};
  const int k = small_joint ? static_cast<int>(a.joint_qubits.size()) : 0;
  if (small_joint) a.metrics.fidelity = MetricValue{fidelity(a.joint_state, a.ideal_joint_state), std::nullopt};
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const DensityMatrix pair = partial_trace(a.joint_state, {i, j});
      a.metrics.tangles.push_back({a.joint_qubits[i], a.joint_qubits[j], MetricValue{tangle(pair), std::nullopt}});
    }
  }
  if (k == 3) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(hermitian_part(a.ideal_joint_state));
    const StateVector top = es.eigenvectors().col(es.eigenvectors().cols() - 1);
    a.ghz_frame = ghz_local_frame(top);
    a.metrics.ghz_witness = MetricValue{ghz_witness(a.joint_state, *a.ghz_frame), std::nullopt};
  }

  const int n = static_cast<int>(order.size());
  const int fbits = static_cast<int>(a.function_qubits.size());
  const std::size_t fdim = std::size_t{1} << fbits;
  for (std::size_t x = 0; x < a.argument_distribution.size(); ++x) {
    if (a.argument_distribution[x] < 1e-12) continue;
    ConditionalRow row;
    row.argument = outcome_label(x, n);
    row.probability = a.argument_distribution[x];
    row.distribution.assign(joint_probs.begin() + static_cast<std::ptrdiff_t>(x * fdim),
                            joint_probs.begin() + static_cast<std::ptrdiff_t>((x + 1) * fdim));
    for (double& v : row.distribution) v /= row.probability;
    const auto best = std::max_element(row.distribution.begin(), row.distribution.end());
    row.best = outcome_label(static_cast<std::size_t>(best - row.distribution.begin()), fbits);
    row.best_probability = *best;
    a.conditional.push_back(std::move(row));
  }
  return a;
}

}  // namespace shorlab
