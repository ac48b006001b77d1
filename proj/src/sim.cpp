#include "shorlab/sim.hpp"

#include "shorlab/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace shorlab {

bool NoiseModel::noiseless() const {
  if (depolarizing_p != 0.0 || relative_visibility != 1.0) return false;
  return std::all_of(gate_visibility.begin(), gate_visibility.end(), [](double v) { return v == 1.0; });
}

void NoiseModel::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  bool ok = in_unit(relative_visibility) && in_unit(depolarizing_p) && in_unit(gate_success);
  for (double v : gate_visibility) ok = ok && in_unit(v);
  if (!ok) throw PreconditionError("noise parameters must lie in [0, 1]");
}

NoiseModel layout_noise(const Circuit& c) {
  NoiseModel m;
  std::set<int> interfered;
  for (const Gate& g : expand_markers(c).gates) {
    if (!g.interferometric()) continue;
    const bool fresh = !interfered.count(g.qubits[0]) && !interfered.count(g.qubits[1]);
    m.gate_visibility.push_back(fresh ? kDependentPairVisibility : kIndependentPairVisibility);
    interfered.insert(g.qubits.begin(), g.qubits.end());
  }
  return m;
}

namespace {

void check_width(int width, int cap, const char* what) {
  if (width > cap) {
    throw PreconditionError("circuit width " + std::to_string(width) + " exceeds the " + what + " cap of " +
                            std::to_string(cap) + " qubits");
  }
}

// rho <- G rho G^dagger for a local gate matrix.
void conjugate(DensityMatrix& rho, const ComplexMatrix<double>& g, std::span<const int> qubits, int width) {
  apply_local(rho, g, qubits, width);
  rho.adjointInPlace();
  apply_local(rho, g, qubits, width);
  rho.adjointInPlace();
}

// Scales coherences between different values of the qubit pair by v.
void dephase_pair(DensityMatrix& rho, int a, int b, int width, double v) {
  const std::size_t mask = (std::size_t{1} << bit_position(a, width)) | (std::size_t{1} << bit_position(b, width));
  const auto dim = static_cast<std::size_t>(rho.rows());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & mask) != (j & mask)) rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *= v;
    }
  }
}

void depolarize(DensityMatrix& rho, const std::vector<int>& qubits, int width, double p) {
  if (p == 0.0) return;
  const int k = static_cast<int>(qubits.size());
  const std::size_t local = std::size_t{1} << k;
  std::size_t mask = 0;
  std::vector<std::size_t> off(local, 0);
  for (int b = 0; b < k; ++b) mask |= std::size_t{1} << bit_position(qubits[b], width);
  for (std::size_t l = 0; l < local; ++l) {
    for (int b = 0; b < k; ++b) {
      if ((l >> (k - 1 - b)) & 1U) off[l] |= std::size_t{1} << bit_position(qubits[b], width);
    }
  }
  const auto dim = static_cast<std::size_t>(rho.rows());
  const double inv = 1.0 / static_cast<double>(local);
  auto at = [&rho](std::size_t i, std::size_t j) -> Complex& {
    return rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & mask) continue;
    for (std::size_t j0 = 0; j0 < dim; ++j0) {
      if (j0 & mask) continue;
      Complex reduced(0.0);
      for (std::size_t s = 0; s < local; ++s) reduced += at(i0 + off[s], j0 + off[s]);
      for (std::size_t s = 0; s < local; ++s) {
        for (std::size_t t = 0; t < local; ++t) {
          Complex& e = at(i0 + off[s], j0 + off[t]);
          e = (1.0 - p) * e + (s == t ? p * inv * reduced : Complex(0.0));
        }
      }
    }
  }
}

std::size_t label_index(std::size_t basis, const std::vector<int>& reg, bool reversed, int width) {
  const int n = static_cast<int>(reg.size());
  std::size_t label = 0;
  for (int b = 0; b < n; ++b) {
    const int q = reversed ? reg[n - 1 - b] : reg[b];
    if (bit_of(basis, q, width)) label |= std::size_t{1} << (n - 1 - b);
  }
  return label;
}

}  // namespace

void apply_noisy_gate(DensityMatrix& rho, const Gate& g, int width, double visibility, double depolarizing_p) {
  if (g.kind == GateKind::InverseQft) {
    for (const Gate& e : inverse_qft_gates(g.qubits)) apply_noisy_gate(rho, e, width, visibility, depolarizing_p);
    return;
  }
  const auto qs = std::span<const int>(g.qubits);
  if (g.interferometric() && visibility < 1.0) {
    const int c = g.qubits[0];
    const int t = g.qubits[1];
    if (g.kind == GateKind::CNOT) {
      const auto h = gate_matrix<double>(Gate::h(t));
      const int tq[] = {t};
      conjugate(rho, h, tq, width);
      dephase_pair(rho, c, t, width, visibility);
      conjugate(rho, h, tq, width);
    } else {
      dephase_pair(rho, c, t, width, visibility);
    }
  }
  conjugate(rho, gate_matrix<double>(g), qs, width);
  depolarize(rho, g.qubits, width, depolarizing_p);
}

DensityMatrix apply_circuit(const Circuit& c, DensityMatrix rho, const NoiseModel& noise) {
  noise.validate();
  std::size_t ordinal = 0;
  for (const Gate& g : expand_markers(c).gates) {
    const double v = g.interferometric() ? noise.visibility(ordinal++) : 1.0;
    apply_noisy_gate(rho, g, c.width, v, noise.depolarizing_p);
  }
  return rho;
}

StateVector run_pure_prefix(const Circuit& c, std::size_t end, std::optional<std::uint64_t> input,
                            const DenseLimits& limits) {
  check_width(c.width, limits.state_qubits, "state-vector");
  StateVector psi = basis_state(c.width, input.value_or(c.input_index()));
  end = std::min(end, c.gates.size());
  for (std::size_t i = 0; i < end; ++i) apply_gate(psi, c.gates[i], c.width);
  return psi;
}

StateVector run_pure(const Circuit& c, std::optional<std::uint64_t> input, const DenseLimits& limits) {
  return run_pure_prefix(c, c.gates.size(), input, limits);
}

DensityMatrix run_density_prefix(const Circuit& c, std::size_t end, const NoiseModel& noise,
                                 std::optional<std::uint64_t> input, const DenseLimits& limits) {
  check_width(c.width, limits.density_qubits, "density-matrix");
  noise.validate();
  const std::size_t idx = input.value_or(c.input_index());
  DensityMatrix rho = DensityMatrix::Zero(Eigen::Index{1} << c.width, Eigen::Index{1} << c.width);
  rho(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = 1.0;
  end = std::min(end, c.gates.size());
  // Visibility ordinals count interferometric gates after marker expansion.
  std::size_t ordinal = 0;
  for (std::size_t i = 0; i < end; ++i) {
    const Gate& g = c.gates[i];
    const std::vector<Gate> parts = g.kind == GateKind::InverseQft ? inverse_qft_gates(g.qubits) : std::vector<Gate>{g};
    for (const Gate& e : parts) {
      const double v = e.interferometric() ? noise.visibility(ordinal++) : 1.0;
      apply_noisy_gate(rho, e, c.width, v, noise.depolarizing_p);
    }
  }
  return rho;
}

DensityMatrix run_density(const Circuit& c, const NoiseModel& noise, std::optional<std::uint64_t> input,
                          const DenseLimits& limits) {
  return run_density_prefix(c, c.gates.size(), noise, input, limits);
}

std::vector<int> complement_of(const std::vector<int>& keep, int width) {
  std::vector<int> out;
  for (int q = 0; q < width; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) out.push_back(q);
  }
  return out;
}

std::vector<double> register_probabilities(const DensityMatrix& rho, const std::vector<int>& reg, bool reversed) {
  const int width = qubits_for_dimension(rho.rows());
  std::vector<double> p(std::size_t{1} << reg.size(), 0.0);
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    p[label_index(static_cast<std::size_t>(i), reg, reversed, width)] += rho(i, i).real();
  }
  return p;
}

std::vector<double> register_probabilities(const StateVector& psi, const std::vector<int>& reg, bool reversed) {
  const int width = qubits_for_dimension(psi.size());
  std::vector<double> p(std::size_t{1} << reg.size(), 0.0);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    p[label_index(static_cast<std::size_t>(i), reg, reversed, width)] += std::norm(psi(i));
  }
  return p;
}

std::string outcome_label(std::size_t index, int bits) {
  std::string s(static_cast<std::size_t>(bits), '0');
  for (int b = 0; b < bits; ++b) {
    if ((index >> (bits - 1 - b)) & 1U) s[static_cast<std::size_t>(b)] = '1';
  }
  return s;
}

std::vector<double> MeasurementRecord::frequencies() const {
  if (is_exact()) return exact;
  std::vector<double> f(counts.size(), 0.0);
  if (shots == 0) return f;
  for (std::size_t i = 0; i < counts.size(); ++i) f[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
  return f;
}

std::vector<std::uint64_t> sample_counts(const std::vector<double>& probabilities, std::uint64_t shots, Rng& rng) {
  std::vector<double> weights(probabilities.size());
  std::transform(probabilities.begin(), probabilities.end(), weights.begin(), [](double p) { return std::max(0.0, p); });
  if (std::accumulate(weights.begin(), weights.end(), 0.0) <= 0.0) {
    throw PreconditionError("cannot sample from an all-zero distribution");
  }
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) ++counts[dist(rng)];
  return counts;
}

namespace {

MeasurementRecord logical_record(const std::vector<double>& probs, std::size_t bits, std::uint64_t shots,
                                 std::uint64_t seed) {
  if (shots < 1) throw PreconditionError("measurement needs at least one shot");
  MeasurementRecord rec;
  rec.basis = std::string(bits, 'Z');
  Rng rng(seed);
  rec.counts = sample_counts(probs, shots, rng);
  rec.shots = shots;
  return rec;
}

}  // namespace

MeasurementRecord measure_logical(const DensityMatrix& rho, const std::vector<int>& reg, bool reversed,
                                  std::uint64_t shots, std::uint64_t seed) {
  if (reg.empty()) throw PreconditionError("measured register is empty");
  return logical_record(register_probabilities(rho, reg, reversed), reg.size(), shots, seed);
}

MeasurementRecord measure_logical(const StateVector& psi, const std::vector<int>& reg, bool reversed,
                                  std::uint64_t shots, std::uint64_t seed) {
  if (reg.empty()) throw PreconditionError("measured register is empty");
  return logical_record(register_probabilities(psi, reg, reversed), reg.size(), shots, seed);
}

std::vector<double> conditional_function_distribution(const DensityMatrix& rho,
                                                      const std::vector<int>& argument_qubits,
                                                      const std::vector<int>& function_qubits, std::uint64_t x) {
  std::vector<int> reg = argument_qubits;
  reg.insert(reg.end(), function_qubits.begin(), function_qubits.end());
  const auto joint = register_probabilities(rho, reg, false);
  const std::size_t fdim = std::size_t{1} << function_qubits.size();
  if (x >> argument_qubits.size() != 0) throw PreconditionError("argument outcome out of range");
  std::vector<double> out(fdim);
  double px = 0.0;
  for (std::size_t y = 0; y < fdim; ++y) {
    out[y] = joint[x * fdim + y];
    px += out[y];
  }
  if (px <= 1e-15) throw PreconditionError("conditioning on a zero-probability argument outcome");
  for (double& v : out) v /= px;
  return out;
}

double postselection_yield(const Circuit& c, const NoiseModel& noise) {
  double yield = 1.0;
  for (const Gate& g : expand_markers(c).gates) {
    const auto q = static_cast<int>(g.qubits.size());
    if (g.interferometric()) {
      yield *= noise.gate_success;
    } else if (q >= 3) {
      yield *= std::pow(noise.gate_success, q - 1);
    }
  }
  return yield;
}

}  // namespace shorlab
