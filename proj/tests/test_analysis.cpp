#include "oracle.hpp"

#include "shorlab/builder.hpp"
#include "shorlab/experiment.hpp"
#include "shorlab/gates.hpp"
#include "shorlab/metrics.hpp"
#include "shorlab/sim.hpp"
#include "shorlab/tomography.hpp"

#include <gtest/gtest.h>

using namespace shorlab;

namespace {

oracle::Vec ghz3() {
  oracle::Vec v = oracle::Vec::Zero(8);
  v[0] = v[7] = 1.0 / std::sqrt(2.0);
  return v;
}

oracle::Vec bell() {
  oracle::Vec v = oracle::Vec::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return v;
}

void expect_physical(const oracle::Mat& m, double tol = 1e-8) {
  EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(m.trace().real(), 1.0, 1e-8);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(m);
  EXPECT_GT(es.eigenvalues().minCoeff(), -tol);
}

Channel noisy_gate_channel(const Gate& g, int width, double v, double p = 0.0) {
  return [g, width, v, p](const DensityMatrix& rho) {
    DensityMatrix x = rho;
    apply_noisy_gate(x, g, width, v, p);
    return x;
  };
}

}  // namespace

TEST(Fidelity, Examples) {
  const auto psi = bell();
  EXPECT_NEAR(fidelity(oracle::outer(psi), psi), 1.0, 1e-12);
  oracle::Vec orth = oracle::Vec::Zero(4);
  orth[1] = 1.0;
  EXPECT_NEAR(fidelity(oracle::outer(orth), psi), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(oracle::Mat::Identity(4, 4) / 4.0, psi), 0.25, 1e-12);
  EXPECT_NEAR(fidelity(oracle::Mat::Identity(4, 4) / 4.0, oracle::outer(psi)), 0.25, 1e-10);
}

TEST(Fidelity, SelfFidelityOfRandomStatesIsOne) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 100; ++i) {
    const auto rho = oracle::random_density(4, gen);
    EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-8);
  }
}

TEST(Fidelity, UhlmannMatchesCommutingClosedForm) {
  // Diagonal states: F = (sum_i sqrt(p_i q_i))^2.
  oracle::Mat a = oracle::Mat::Zero(4, 4), b = oracle::Mat::Zero(4, 4);
  const double p[] = {0.1, 0.2, 0.3, 0.4}, q[] = {0.4, 0.3, 0.2, 0.1};
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    a(i, i) = p[i];
    b(i, i) = q[i];
    s += std::sqrt(p[i] * q[i]);
  }
  EXPECT_NEAR(fidelity(a, b), s * s, 1e-10);
  EXPECT_THROW(fidelity(a, oracle::Mat::Identity(2, 2)), PreconditionError);
}

TEST(LinearEntropy, Examples) {
  EXPECT_NEAR(linear_entropy(oracle::outer(bell())), 0.0, 1e-12);
  for (int d : {2, 4, 8, 16}) EXPECT_NEAR(linear_entropy(oracle::Mat::Identity(d, d) / double(d)), 1.0, 1e-12);
  oracle::Mat mix = oracle::Mat::Zero(4, 4);
  mix(0, 0) = mix(3, 3) = 0.5;
  EXPECT_NEAR(linear_entropy(mix), 2.0 / 3.0, 1e-12);
  std::mt19937_64 gen(5);
  for (int i = 0; i < 50; ++i) {
    const double s = linear_entropy(oracle::random_density(4, gen));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Tangle, Examples) {
  EXPECT_NEAR(tangle(oracle::outer(bell())), 1.0, 1e-10);
  std::mt19937_64 gen(2);
  const oracle::Vec prod = oracle::kron(oracle::random_qubit(gen), oracle::random_qubit(gen));
  EXPECT_NEAR(tangle(oracle::outer(prod)), 0.0, 1e-10);
  const double p = 0.8;
  const oracle::Mat werner = p * oracle::outer(bell()) + (1 - p) * oracle::Mat::Identity(4, 4) / 4.0;
  EXPECT_NEAR(concurrence(werner), (3 * p - 1) / 2, 1e-10);
  EXPECT_NEAR(tangle(werner), 0.49, 1e-10);
  EXPECT_THROW(tangle(oracle::Mat::Identity(8, 8) / 8.0), PreconditionError);
}

TEST(Tangle, SeparableMixturesHaveZeroTangle) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    oracle::Mat rho = oracle::Mat::Zero(4, 4);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double w = u(gen);
      const oracle::Vec v = oracle::kron(oracle::random_qubit(gen), oracle::random_qubit(gen));
      rho += w * oracle::outer(v);
      total += w;
    }
    EXPECT_NEAR(tangle(rho / total), 0.0, 1e-8);
  }
}

TEST(GhzWitness, Examples) {
  const LocalFrame none{'I', 'I', 'I'};
  EXPECT_NEAR(ghz_witness(oracle::outer(ghz3()), none), -0.5, 1e-12);
  EXPECT_NEAR(ghz_witness(oracle::Mat::Identity(8, 8) / 8.0, none), 3.0 / 8.0, 1e-12);
  const double q = (0.59 - 1.0 / 8) / (1 - 1.0 / 8);
  const oracle::Mat noisy = q * oracle::outer(ghz3()) + (1 - q) * oracle::Mat::Identity(8, 8) / 8.0;
  EXPECT_NEAR(ghz_witness(noisy, none), -0.09, 1e-12);
  EXPECT_THROW(ghz_witness(oracle::Mat::Identity(4, 4) / 4.0, none), PreconditionError);
}

TEST(GhzWitness, IsOneHalfMinusFrameFidelity) {
  // The frozen frame flips the last qubit: target (|001> + |110>)/sqrt 2.
  oracle::Vec target = oracle::Vec::Zero(8);
  target[1] = target[6] = 1.0 / std::sqrt(2.0);
  std::mt19937_64 gen(13);
  for (int i = 0; i < 20; ++i) {
    const auto rho = oracle::random_density(8, gen);
    EXPECT_NEAR(ghz_witness(rho, kOrderTwoGhzFrame), 0.5 - fidelity(rho, target), 1e-12);
  }
}

TEST(GhzWitness, FrameOfIdealOrderTwoJointStateIsFrozen) {
  oracle::Vec target = oracle::Vec::Zero(8);
  target[1] = target[6] = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(ghz_local_frame(target), kOrderTwoGhzFrame);
  const auto a = analyze_circuit(build_order_finding_circuit(15, 4, 2, Level::Partial), NoiseModel::off());
  ASSERT_TRUE(a.ghz_frame.has_value());
  EXPECT_EQ(*a.ghz_frame, kOrderTwoGhzFrame);
  ASSERT_EQ(a.joint_qubits.size(), 3U);
  EXPECT_NEAR(fidelity(a.joint_state, target), 1.0, 1e-12);
  EXPECT_NEAR(a.metrics.ghz_witness->value, -0.5, 1e-12);
}

TEST(StateTomography, ExactBellRoundTrip) {
  const auto records = simulate_state_tomography(oracle::outer(bell()), 0, 1);
  EXPECT_EQ(records.size(), 9U);
  const auto fit = reconstruct_state(records);
  EXPECT_GE(fidelity(fit.rho, bell()), 1 - 1e-8);
  expect_physical(fit.rho);
}

TEST(StateTomography, MaximallyMixedInputStaysMixed) {
  const auto records = simulate_state_tomography(oracle::Mat::Identity(4, 4) / 4.0, 0, 1);
  EXPECT_GE(linear_entropy(reconstruct_state(records).rho), 0.99);
  const auto sampled = simulate_state_tomography(oracle::Mat::Identity(4, 4) / 4.0, 10000, 3);
  EXPECT_GE(linear_entropy(reconstruct_state(sampled).rho), 0.99);
}

TEST(StateTomography, LinearInversionIsExactForExactData) {
  std::mt19937_64 gen(17);
  const auto rho = oracle::random_density(4, gen);
  const auto est = linear_inversion_state(simulate_state_tomography(rho, 0, 1));
  EXPECT_LT((est - rho).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(StateTomography, GhzThresholdCalibration) {
  // 20 seeds at 10^4 shots per setting; the frozen threshold is 0.98.
  double worst = 1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto fit = reconstruct_state(simulate_state_tomography(oracle::outer(ghz3()), 10000, seed));
    expect_physical(fit.rho);
    worst = std::min(worst, fidelity(fit.rho, ghz3()));
  }
  EXPECT_GE(worst, 0.98);
}

TEST(StateTomography, ReportsIncompleteSettingsAndNonConvergence) {
  auto records = simulate_state_tomography(oracle::outer(bell()), 1000, 1);
  auto missing = records;
  missing.pop_back();
  EXPECT_THROW(reconstruct_state(missing), PreconditionError);
  MleOptions strict;
  strict.tolerance = 0.0;
  strict.max_iterations = 3;
  EXPECT_THROW(reconstruct_state(records, strict), ConvergenceError);
}

TEST(StateTomography, SameSeedSameCounts) {
  const auto a = simulate_state_tomography(oracle::outer(ghz3()), 500, 9);
  const auto b = simulate_state_tomography(oracle::outer(ghz3()), 500, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].counts, b[i].counts);
  EXPECT_EQ(a.size(), 27U);
}

TEST(ProcessTomography, IdealCnotExact) {
  const auto u = gate_matrix<double>(Gate::cnot(0, 1));
  const auto fit = simulate_process_tomography(unitary_channel(u), 2, 0, 1);
  EXPECT_GE(process_fidelity(chi_of_unitary(u), fit.chi), 1 - 1e-6);
  expect_physical(fit.chi, 1e-8);
}

TEST(ProcessTomography, IdentityVersusCz) {
  const oracle::Mat cz = gate_matrix<double>(Gate::cz(0, 1));
  const auto fit = simulate_process_tomography(unitary_channel(oracle::Mat::Identity(4, 4)), 2, 0, 1);
  EXPECT_NEAR(process_fidelity(chi_of_unitary(cz), fit.chi), 0.25, 1e-6);
  EXPECT_NEAR(process_fidelity(chi_of_unitary(cz), chi_of_unitary(oracle::Mat::Identity(4, 4))), 0.25, 1e-12);
}

TEST(ProcessTomography, DephasedCzMatchesClosedForm) {
  // V U rho U^dag + (1 - V) U D(rho) U^dag with D full dephasing: F_p = V + (1 - V)/4.
  const oracle::Mat cz = gate_matrix<double>(Gate::cz(0, 1));
  const auto ideal = chi_of_unitary(cz);
  double last = 1.0 + 1e-12;
  for (double v : {1.0, 0.95, 0.85, 0.7, 0.5, 0.0}) {
    const double f = process_fidelity(ideal, chi_of_channel(noisy_gate_channel(Gate::cz(0, 1), 2, v), 2));
    EXPECT_NEAR(f, (1 + 3 * v) / 4, 1e-12) << v;
    EXPECT_LE(f, last);
    last = f;
  }
  const auto fit = simulate_process_tomography(noisy_gate_channel(Gate::cz(0, 1), 2, 0.85), 2, 0, 1);
  EXPECT_NEAR(process_fidelity(ideal, fit.chi), (1 + 3 * 0.85) / 4, 1e-6);
  expect_physical(fit.chi, 1e-8);
}

TEST(ProcessTomography, ChoiAndChiConventions) {
  const oracle::Mat x = oracle::pauli_x();
  const auto chi = chi_of_unitary(x);
  EXPECT_NEAR(chi(1, 1).real(), 1.0, 1e-12);  // basis order I, X, Y, Z
  EXPECT_NEAR(chi.trace().real(), 1.0, 1e-12);
  const auto j = choi_matrix(unitary_channel(x), 1);
  EXPECT_NEAR(j.trace().real(), 2.0, 1e-12);
  std::mt19937_64 gen(4);
  const auto rho = oracle::random_density(2, gen);
  EXPECT_LT((channel_from_choi(j)(rho) - x * rho * x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(simulate_process_data(unitary_channel(oracle::Mat::Identity(8, 8)), 3, 0, 1), PreconditionError);
}

TEST(ProcessTomography, FiniteShotBootstrapGivesErrorBar) {
  const oracle::Mat cz = gate_matrix<double>(Gate::cz(0, 1));
  const auto ideal = chi_of_unitary(cz);
  const auto data = simulate_process_data(noisy_gate_channel(Gate::cz(0, 1), 2, 0.85), 2, 2000, 3);
  const auto fit = reconstruct_process(data);
  const double f = process_fidelity(ideal, fit.chi);
  EXPECT_GT(f, 0.25);
  EXPECT_LT(f, 1.0);
  const auto b = bootstrap_process_metric(
      fit.choi, data, [&](const ComplexMatrix<double>& chi) { return process_fidelity(ideal, chi); }, 100, 4);
  EXPECT_EQ(b.resamples, 100);
  EXPECT_GT(b.stddev, 0.0);
  EXPECT_LT(b.stddev, 0.02);
  EXPECT_THROW(bootstrap_process_metric(fit.choi, data, [](const ComplexMatrix<double>&) { return 0.0; }, 99, 4),
               PreconditionError);
}

TEST(StateTomography, BootstrapErrorBar) {
  const auto records = simulate_state_tomography(oracle::outer(ghz3()), 2000, 6);
  const auto fit = reconstruct_state(records);
  const auto b = bootstrap_state_metric(fit.rho, records, [](const DensityMatrix& r) { return fidelity(r, ghz3()); },
                                        100, 7);
  EXPECT_GT(b.stddev, 0.0);
  EXPECT_LT(b.stddev, 0.02);
  EXPECT_THROW(bootstrap_state_metric(fit.rho, simulate_state_tomography(oracle::outer(ghz3()), 0, 1),
                                      [](const DensityMatrix&) { return 0.0; }, 100, 7),
               PreconditionError);
}

TEST(ProductRule, Examples) {
  EXPECT_DOUBLE_EQ(product_rule_fidelity({1.0, 1.0}), 1.0);
  EXPECT_NEAR(product_rule_fidelity({0.85, 0.89}), 0.7565, 1e-15);
  EXPECT_DOUBLE_EQ(product_rule_fidelity({0.7, 0.0}), 0.0);
}

TEST(ProductRule, JointChiFactorizes) {
  // Dephased CZ on (0, 1) next to a dephased CNOT on (2, 3).
  auto joint = [](const DensityMatrix& rho) {
    DensityMatrix x = rho;
    apply_noisy_gate(x, Gate::cz(0, 1), 4, 0.85, 0.0);
    apply_noisy_gate(x, Gate::cnot(2, 3), 4, 0.89, 0.02);
    return x;
  };
  const oracle::Mat u_cz = gate_matrix<double>(Gate::cz(0, 1));
  const oracle::Mat u_cnot = gate_matrix<double>(Gate::cnot(0, 1));
  const double fa = process_fidelity(chi_of_unitary(u_cz), chi_of_channel(noisy_gate_channel(Gate::cz(0, 1), 2, 0.85), 2));
  const double fb =
      process_fidelity(chi_of_unitary(u_cnot), chi_of_channel(noisy_gate_channel(Gate::cnot(0, 1), 2, 0.89, 0.02), 2));
  const double fj = process_fidelity(chi_of_unitary(oracle::kron(u_cz, u_cnot)), chi_of_channel(joint, 4));
  EXPECT_NEAR(fj, fa * fb, 1e-8);
  EXPECT_NEAR(fj, product_rule_fidelity({fa, fb}), 1e-8);
}

TEST(ChainedBound, Examples) {
  EXPECT_DOUBLE_EQ(chained_error_bound({1.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(chained_error_bound({0.8}), 0.8);
  const double b = chained_error_bound({0.78, 0.90});
  const double angle = std::acos(std::sqrt(0.78)) + std::acos(std::sqrt(0.90));
  EXPECT_NEAR(b, std::cos(angle) * std::cos(angle), 1e-12);
  EXPECT_NEAR(b, 0.475452, 1e-6);
  EXPECT_LE(b, 0.78);
  EXPECT_NEAR(chained_error_bound({0.1, 0.1, 0.1}), 0.0, 1e-15);  // angles saturate at pi/2
  double prev = 0.0;
  for (double f : {0.9, 0.99, 0.999, 0.9999}) {
    const double bound = chained_error_bound({f, f});
    EXPECT_LE(bound, f);
    EXPECT_GT(bound, prev);
    prev = bound;
  }
  EXPECT_GT(prev, 0.999);
}
