#include "shorlab/tomography.hpp"

#include "shorlab/errors.hpp"
#include "shorlab/gates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace shorlab {

namespace {

using Matrix = ComplexMatrix<double>;

int setting_qubits(const std::vector<MeasurementRecord>& records) {
  if (records.empty()) throw PreconditionError("no tomography records");
  return static_cast<int>(records.front().basis.size());
}

void require_complete(const std::vector<MeasurementRecord>& records) {
  const int k = setting_qubits(records);
  std::map<std::string, int> seen;
  for (const auto& r : records) {
    if (static_cast<int>(r.basis.size()) != k) throw PreconditionError("records mix qubit counts");
    const std::size_t outcomes = r.is_exact() ? r.exact.size() : r.counts.size();
    if (outcomes != (std::size_t{1} << k)) throw PreconditionError("record for " + r.basis + " has wrong outcome count");
    if (!r.is_exact() && r.shots == 0) throw PreconditionError("record for " + r.basis + " has no shots");
    ++seen[r.basis];
  }
  for (const auto& s : pauli_settings(k)) {
    if (!seen.count(s)) throw PreconditionError("incomplete setting set: missing " + s);
  }
}

// Outcome projectors U^dagger |o><o| U of one setting.
std::vector<Matrix> projectors(const std::string& setting) {
  const Matrix u = measurement_rotation(setting);
  std::vector<Matrix> out;
  for (Eigen::Index o = 0; o < u.rows(); ++o) out.push_back(u.row(o).adjoint() * u.row(o));
  return out;
}

// Flattened data: projector list and per-setting frequencies/weights.
struct Dataset {
  std::vector<Matrix> ops;
  std::vector<double> freq;  // normalized within each setting
  std::vector<double> weight;  // shots of that setting (1 for exact records)
  Matrix rows;  // row j is vec(ops[j]^T), so p = Re(rows * vec(state))

  void stack() {
    const Eigen::Index n = ops.front().rows();
    rows.resize(static_cast<Eigen::Index>(ops.size()), n * n);
    for (std::size_t j = 0; j < ops.size(); ++j) {
      const Matrix t = ops[j].transpose();
      rows.row(static_cast<Eigen::Index>(j)) = Eigen::Map<const ComplexVector<double>>(t.data(), n * n).transpose();
    }
  }
};

double log_likelihood(const Dataset& d, const std::vector<double>& p) {
  double l = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (d.freq[j] > 0.0) l += d.weight[j] * d.freq[j] * std::log(std::max(p[j], 1e-300));
  }
  return l;
}

std::vector<double> probabilities(const Dataset& d, const Matrix& state) {
  const ComplexVector<double> v = d.rows * Eigen::Map<const ComplexVector<double>>(state.data(), state.size());
  std::vector<double> p(static_cast<std::size_t>(v.size()));
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = v(static_cast<Eigen::Index>(j)).real();
  return p;
}

// sum_j w_j ops_j
Matrix weighted_sum(const Dataset& d, const std::vector<double>& w) {
  const Eigen::Index n = d.ops.front().rows();
  const ComplexVector<double> v = d.rows.transpose() * Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())).cast<std::complex<double>>();
  return Eigen::Map<const Matrix>(v.data(), n, n).transpose();
}

// Ratio weights f/p entering both fixed-point iterations.
std::vector<double> ratios(const Dataset& d, const std::vector<double>& p) {
  std::vector<double> r(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (d.freq[j] > 0.0) r[j] = d.weight[j] * d.freq[j] / std::max(p[j], 1e-15);
  }
  return r;
}

Matrix inverse_sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  Eigen::VectorXd v = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix trace_output(const Matrix& j, Eigen::Index d) {
  Matrix t = Matrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      for (Eigen::Index k = 0; k < d; ++k) t(a, b) += j(a * d + k, b * d + k);
    }
  }
  return t;
}

// All Pauli strings of length k in IXYZ lexicographic order.
std::vector<std::string> pauli_strings(int k) {
  std::vector<std::string> out{""};
  for (int q = 0; q < k; ++q) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(s + c);
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<std::string> pauli_settings(int qubits) {
  std::vector<std::string> out{""};
  for (int q = 0; q < qubits; ++q) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      for (char c : {'X', 'Y', 'Z'}) next.push_back(s + c);
    }
    out = std::move(next);
  }
  return out;
}

ComplexMatrix<double> measurement_rotation(const std::string& setting) {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix h(2, 2);
  h << s, s, s, -s;
  Matrix sdg = Matrix::Identity(2, 2);
  sdg(1, 1) = Complex(0, -1);
  std::vector<Matrix> f;
  for (char c : setting) {
    switch (c) {
      case 'X': f.push_back(h); break;
      case 'Y': f.push_back(h * sdg); break;
      case 'Z': f.push_back(Matrix::Identity(2, 2)); break;
      default: throw PreconditionError(std::string("unknown measurement basis '") + c + "'");
    }
  }
  return kron_all(f);
}

std::vector<double> setting_probabilities(const DensityMatrix& rho, const std::string& setting) {
  const Matrix u = measurement_rotation(setting);
  if (u.rows() != rho.rows()) throw PreconditionError("setting length does not match the state");
  const Matrix r = u * rho * u.adjoint();
  std::vector<double> p(static_cast<std::size_t>(r.rows()));
  for (Eigen::Index i = 0; i < r.rows(); ++i) p[static_cast<std::size_t>(i)] = std::max(0.0, r(i, i).real());
  return p;
}

std::vector<MeasurementRecord> simulate_state_tomography(const DensityMatrix& rho, std::uint64_t shots,
                                                         std::uint64_t seed) {
  const int k = qubits_for_dimension(rho.rows());
  std::vector<MeasurementRecord> out;
  Rng root(seed);
  std::uint64_t stream = 0;
  for (const auto& s : pauli_settings(k)) {
    MeasurementRecord rec;
    rec.basis = s;
    const auto p = setting_probabilities(rho, s);
    if (shots == 0) {
      rec.exact = p;
    } else {
      Rng rng = root.split(stream);
      rec.counts = sample_counts(p, shots, rng);
      rec.shots = shots;
    }
    ++stream;
    out.push_back(std::move(rec));
  }
  return out;
}

DensityMatrix linear_inversion_state(const std::vector<MeasurementRecord>& records) {
  require_complete(records);
  const int k = setting_qubits(records);
  const Eigen::Index d = Eigen::Index{1} << k;
  DensityMatrix rho = DensityMatrix::Zero(d, d);
  for (const auto& p : pauli_strings(k)) {
    double sum = 0.0;
    int used = 0;
    for (const auto& r : records) {
      bool compatible = true;
      for (int q = 0; q < k; ++q) compatible = compatible && (p[q] == 'I' || p[q] == r.basis[q]);
      if (!compatible) continue;
      const auto f = r.frequencies();
      for (std::size_t o = 0; o < f.size(); ++o) {
        int sign = 1;
        for (int q = 0; q < k; ++q) {
          if (p[q] != 'I' && ((o >> (k - 1 - q)) & 1U)) sign = -sign;
        }
        sum += sign * f[o];
      }
      ++used;
    }
    rho += (sum / used) * pauli_string(p) / static_cast<double>(d);
  }
  return rho;
}

StateReconstruction reconstruct_state(const std::vector<MeasurementRecord>& records, const MleOptions& options) {
  require_complete(records);
  Dataset data;
  for (const auto& r : records) {
    const auto ops = projectors(r.basis);
    const auto f = r.frequencies();
    for (std::size_t o = 0; o < ops.size(); ++o) {
      data.ops.push_back(ops[o]);
      data.freq.push_back(f[o]);
      data.weight.push_back(r.is_exact() ? 1.0 : static_cast<double>(r.shots));
    }
  }
  const double total = std::accumulate(data.weight.begin(), data.weight.end(), 0.0) /
                       static_cast<double>(Eigen::Index{1} << setting_qubits(records));
  for (double& w : data.weight) w /= total;

  data.stack();
  DensityMatrix rho = project_psd(linear_inversion_state(records), 1.0);
  const Eigen::Index d = rho.rows();
  auto p = probabilities(data, rho);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (data.freq[j] > 0.0 && p[j] < 1e-12) {
      rho = 0.99 * rho + 0.01 * DensityMatrix::Identity(d, d) / static_cast<double>(d);
      p = probabilities(data, rho);
      break;
    }
  }
  StateReconstruction out;
  double logl = log_likelihood(data, p);
  for (int it = 1; it <= options.max_iterations; ++it) {
    const auto w = ratios(data, p);
    const DensityMatrix r = weighted_sum(data, w);
    rho = hermitian_part(DensityMatrix(r * rho * r));
    rho /= rho.trace().real();
    p = probabilities(data, rho);
    const double next = log_likelihood(data, p);
    const double change = std::abs(next - logl);
    logl = next;
    if (change < options.tolerance) {
      out.rho = rho;
      out.iterations = it;
      out.log_likelihood = logl;
      return out;
    }
    if (it == options.max_iterations) throw ConvergenceError("state MLE did not converge", change);
  }
  throw ConvergenceError("state MLE did not converge", 0.0);
}

Channel unitary_channel(const ComplexMatrix<double>& u) {
  return [u](const DensityMatrix& rho) { return DensityMatrix(u * rho * u.adjoint()); };
}

Channel circuit_channel(const Circuit& c, const NoiseModel& noise) {
  return [c, noise](const DensityMatrix& rho) { return apply_circuit(c, rho, noise); };
}

std::vector<std::string> process_inputs(int qubits) {
  std::vector<std::string> out{""};
  for (int q = 0; q < qubits; ++q) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      for (char c : {'0', '1', '+', 'i'}) next.push_back(s + c);
    }
    out = std::move(next);
  }
  return out;
}

DensityMatrix input_state(const std::string& label) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Matrix> f;
  for (char c : label) {
    StateVector v(2);
    switch (c) {
      case '0': v << 1.0, 0.0; break;
      case '1': v << 0.0, 1.0; break;
      case '+': v << s, s; break;
      case 'i': v << Complex(s), Complex(0, s); break;
      default: throw PreconditionError(std::string("unknown input state '") + c + "'");
    }
    f.push_back(outer(v));
  }
  return kron_all(f);
}

std::vector<ProcessRecord> simulate_process_data(const Channel& channel, int qubits, std::uint64_t shots,
                                                 std::uint64_t seed) {
  if (qubits < 1 || qubits > 2) throw PreconditionError("process tomography is limited to one or two qubits");
  std::vector<ProcessRecord> out;
  std::uint64_t stream = 0;
  for (const auto& in : process_inputs(qubits)) {
    ProcessRecord rec;
    rec.input = in;
    rec.settings = simulate_state_tomography(channel(input_state(in)), shots, seed + 7919 * ++stream);
    out.push_back(std::move(rec));
  }
  return out;
}

ComplexMatrix<double> choi_matrix(const Channel& channel, int qubits) {
  const Eigen::Index d = Eigen::Index{1} << qubits;
  Matrix j = Matrix::Zero(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      DensityMatrix e = DensityMatrix::Zero(d, d);
      e(a, b) = 1.0;
      j.block(a * d, b * d, d, d) = channel(e);
    }
  }
  return j;
}

ProcessReconstruction reconstruct_process(const std::vector<ProcessRecord>& records, const MleOptions& options) {
  if (records.empty()) throw PreconditionError("no process records");
  const int k = static_cast<int>(records.front().input.size());
  if (k < 1 || k > 2) throw PreconditionError("process tomography is limited to one or two qubits");
  const Eigen::Index d = Eigen::Index{1} << k;
  std::map<std::string, int> seen;
  Dataset data;
  // Projector j is inputs[group[j]] (x) local[j].
  std::vector<Matrix> inputs;
  std::vector<Matrix> outputs;  // linear-inversion estimate per input
  std::vector<Matrix> local;
  std::vector<std::size_t> group;
  for (const auto& rec : records) {
    require_complete(rec.settings);
    ++seen[rec.input];
    const Matrix in_t = input_state(rec.input).transpose();
    inputs.push_back(in_t);
    outputs.push_back(linear_inversion_state(rec.settings));
    for (const auto& r : rec.settings) {
      const auto ops = projectors(r.basis);
      const auto f = r.frequencies();
      for (std::size_t o = 0; o < ops.size(); ++o) {
        local.push_back(ops[o]);
        group.push_back(inputs.size() - 1);
        data.freq.push_back(f[o]);
        data.weight.push_back(r.is_exact() ? 1.0 : static_cast<double>(r.shots));
      }
    }
  }
  for (const auto& in : process_inputs(k)) {
    if (!seen.count(in)) throw PreconditionError("incomplete input set: missing " + in);
  }
  const double mean_weight = std::accumulate(data.weight.begin(), data.weight.end(), 0.0) /
                             static_cast<double>(data.weight.size());
  for (double& w : data.weight) w /= mean_weight;

  // Start from linear inversion: out_i = sum_ab rho_i(a, b) J_ab, solved over the inputs.
  const Eigen::Index dim = d * d;
  Matrix r(static_cast<Eigen::Index>(inputs.size()), dim);
  Matrix y(static_cast<Eigen::Index>(inputs.size()), dim);
  for (std::size_t g = 0; g < inputs.size(); ++g) {
    const Matrix rho = inputs[g].transpose();
    for (Eigen::Index a0 = 0; a0 < d; ++a0) {
      for (Eigen::Index b0 = 0; b0 < d; ++b0) r(static_cast<Eigen::Index>(g), a0 * d + b0) = rho(a0, b0);
    }
    y.row(static_cast<Eigen::Index>(g)) = Eigen::Map<const ComplexVector<double>>(outputs[g].data(), dim).transpose();
  }
  const Matrix blocks = r.completeOrthogonalDecomposition().solve(y);
  Matrix lin(dim, dim);
  for (Eigen::Index a0 = 0; a0 < d; ++a0) {
    for (Eigen::Index b0 = 0; b0 < d; ++b0)
      lin.block(a0 * d, b0 * d, d, d) = Eigen::Map<const Matrix>(blocks.row(a0 * d + b0).transpose().eval().data(), d, d);
  }
  Matrix choi = project_psd(lin, static_cast<double>(d));

  // Tr((A (x) B) J) = Tr(B sum_ab A_ba J_ab) with J_ab the d x d blocks of J.
  auto probabilities = [&](const Matrix& j) {
    std::vector<Matrix> out_states(inputs.size(), Matrix::Zero(d, d));
    for (std::size_t g = 0; g < inputs.size(); ++g) {
      for (Eigen::Index a0 = 0; a0 < d; ++a0) {
        for (Eigen::Index b0 = 0; b0 < d; ++b0) out_states[g].noalias() += inputs[g](b0, a0) * j.block(a0 * d, b0 * d, d, d);
      }
    }
    std::vector<double> p(local.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = local[i].transpose().cwiseProduct(out_states[group[i]]).sum().real();
    return p;
  };
  auto weighted_sum = [&](const std::vector<double>& w) {
    std::vector<Matrix> q(inputs.size(), Matrix::Zero(d, d));
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != 0.0) q[group[i]] += w[i] * local[i];
    }
    Matrix kmat = Matrix::Zero(dim, dim);
    for (std::size_t g = 0; g < inputs.size(); ++g) kmat += kron(inputs[g], q[g]);
    return kmat;
  };

  auto p = probabilities(choi);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (data.freq[j] > 0.0 && p[j] < 1e-12) {
      choi = 0.99 * choi + 0.01 * Matrix::Identity(dim, dim) / static_cast<double>(d);
      p = probabilities(choi);
      break;
    }
  }
  ProcessReconstruction out;
  double logl = log_likelihood(data, p);
  for (int it = 1; it <= options.max_iterations; ++it) {
    const auto w = ratios(data, p);
    const Matrix kmat = weighted_sum(w);
    const Matrix kjk = kmat * choi * kmat;
    const Matrix lam = kron(inverse_sqrt_psd(trace_output(kjk, d)), Matrix::Identity(d, d));
    choi = hermitian_part(Matrix(lam * kjk * lam));
    p = probabilities(choi);
    const double next = log_likelihood(data, p);
    const double change = std::abs(next - logl);
    logl = next;
    if (change < options.tolerance) {
      out.choi = choi;
      out.chi = chi_from_choi(choi);
      out.iterations = it;
      out.log_likelihood = logl;
      return out;
    }
    if (it == options.max_iterations) throw ConvergenceError("process MLE did not converge", change);
  }
  throw ConvergenceError("process MLE did not converge", 0.0);
}

ProcessReconstruction simulate_process_tomography(const Channel& channel, int qubits, std::uint64_t shots,
                                                  std::uint64_t seed, const MleOptions& options) {
  return reconstruct_process(simulate_process_data(channel, qubits, shots, seed), options);
}

ComplexMatrix<double> chi_from_choi(const ComplexMatrix<double>& choi) {
  const int k = qubits_for_dimension(choi.rows()) / 2;
  const Eigen::Index d = Eigen::Index{1} << k;
  const auto labels = pauli_strings(k);
  // Column m is |P_m>> = sum_i |i> (x) P_m|i>.
  Matrix basis(d * d, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t m = 0; m < labels.size(); ++m) {
    const Matrix p = pauli_string(labels[m]);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index o = 0; o < d; ++o) basis(i * d + o, static_cast<Eigen::Index>(m)) = p(o, i);
    }
  }
  Matrix chi = basis.adjoint() * choi * basis / static_cast<double>(d * d);
  chi = hermitian_part(chi);
  return chi / chi.trace().real();
}

ComplexMatrix<double> chi_of_unitary(const ComplexMatrix<double>& u) {
  return chi_of_channel(unitary_channel(u), qubits_for_dimension(u.rows()));
}

ComplexMatrix<double> chi_of_channel(const Channel& channel, int qubits) {
  return chi_from_choi(choi_matrix(channel, qubits));
}

double process_fidelity(const ComplexMatrix<double>& chi_ideal, const ComplexMatrix<double>& chi) {
  if (chi_ideal.rows() != chi.rows()) throw PreconditionError("chi matrices differ in dimension");
  const double fi = chi_ideal.trace().real();
  const double fc = chi.trace().real();
  return (chi_ideal * chi).trace().real() / (fi * fc);
}

namespace {

BootstrapResult summarize(const std::vector<double>& values) {
  BootstrapResult out;
  out.resamples = static_cast<int>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / out.resamples;
  double var = 0.0;
  for (double v : values) var += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(var / (out.resamples - 1));
  return out;
}

void require_resampling(int resamples, const std::vector<MeasurementRecord>& records) {
  if (resamples < 100) throw PreconditionError("bootstrap needs at least 100 resamples");
  for (const auto& r : records) {
    if (r.is_exact()) throw PreconditionError("bootstrap needs finite-shot records");
  }
}

std::vector<MeasurementRecord> resample(const DensityMatrix& state, const std::vector<MeasurementRecord>& records,
                                        Rng& rng) {
  std::vector<MeasurementRecord> fake;
  for (const auto& r : records) {
    MeasurementRecord m;
    m.basis = r.basis;
    m.shots = r.shots;
    m.counts = sample_counts(setting_probabilities(state, r.basis), r.shots, rng);
    fake.push_back(std::move(m));
  }
  return fake;
}

}  // namespace

BootstrapResult bootstrap_state_metric(const DensityMatrix& fit, const std::vector<MeasurementRecord>& records,
                                       const std::function<double(const DensityMatrix&)>& metric, int resamples,
                                       std::uint64_t seed, const MleOptions& options) {
  require_resampling(resamples, records);
  std::vector<double> values;
  Rng root(seed);
  for (int b = 0; b < resamples; ++b) {
    Rng rng = root.split(static_cast<std::uint64_t>(b));
    values.push_back(metric(reconstruct_state(resample(fit, records, rng), options).rho));
  }
  return summarize(values);
}

Channel channel_from_choi(const ComplexMatrix<double>& choi) {
  const Eigen::Index d = Eigen::Index{1} << (qubits_for_dimension(choi.rows()) / 2);
  return [choi, d](const DensityMatrix& rho) {
    DensityMatrix out = DensityMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) out += rho(a, b) * choi.block(a * d, b * d, d, d);
    }
    return out;
  };
}

BootstrapResult bootstrap_process_metric(const ComplexMatrix<double>& choi, const std::vector<ProcessRecord>& records,
                                         const std::function<double(const ComplexMatrix<double>&)>& chi_metric,
                                         int resamples, std::uint64_t seed, const MleOptions& options) {
  for (const auto& rec : records) require_resampling(resamples, rec.settings);
  const Channel fit = channel_from_choi(choi);
  std::vector<double> values;
  Rng root(seed);
  for (int b = 0; b < resamples; ++b) {
    Rng rng = root.split(static_cast<std::uint64_t>(b));
    std::vector<ProcessRecord> fake;
    for (const auto& rec : records) fake.push_back({rec.input, resample(fit(input_state(rec.input)), rec.settings, rng)});
    values.push_back(chi_metric(reconstruct_process(fake, options).chi));
  }
  return summarize(values);
}

}  // namespace shorlab
