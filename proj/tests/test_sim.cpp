#include "oracle.hpp"

#include "shorlab/builder.hpp"
#include "shorlab/metrics.hpp"
#include "shorlab/sim.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace shorlab;

namespace {

const std::vector<std::uint64_t> kCoprimes15 = {2, 4, 7, 8, 11, 13, 14};

void expect_valid_density(const DensityMatrix& rho, const std::string& what) {
  EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-10) << what;
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10) << what;
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-8) << what;
}

oracle::Vec bell_on(int a, int b, int width) {
  oracle::Vec v = oracle::Vec::Zero(1 << width);
  v[0] = 1.0 / std::sqrt(2.0);
  v[(1 << (width - 1 - a)) | (1 << (width - 1 - b))] = 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST(RunPure, FullOrderTwoIsBellPairWithIdleTopRail) {
  const auto c = build_order_finding_circuit(15, 4, 2, Level::Full);
  const auto psi = run_pure(c);
  EXPECT_LT((psi - bell_on(1, 2, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RunPure, FullOrderFourIsTwoBellPairs) {
  const auto c = build_order_finding_circuit(15, 2, 3, Level::Full);
  const auto psi = run_pure(c);
  // |0>_q0 (x) Bell(q1, q3) (x) Bell(q2, q4), written out by hand.
  oracle::Vec expected = oracle::Vec::Zero(32);
  for (int a : {0, 1})
    for (int b : {0, 1}) expected[(a << 3) | (b << 2) | (a << 1) | b] = 0.5;
  EXPECT_LT((psi - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RunPure, HadamardWallGivesUniformArgument) {
  Circuit c;
  c.width = 7;
  c.argument_register = {0, 1, 2};
  c.function_register = {3, 4, 5, 6};
  c.gates = {Gate::h(0), Gate::h(1), Gate::h(2)};
  const auto psi = run_pure(c);
  for (int x = 0; x < 8; ++x) EXPECT_NEAR(std::abs(psi[(x << 4) | 1] - 1.0 / std::sqrt(8.0)), 0.0, 1e-12);
  EXPECT_NEAR(psi.squaredNorm(), 1.0, 1e-12);
}

TEST(RunPure, StateCapIsEnforced) {
  DenseLimits tight;
  tight.state_qubits = 4;
  EXPECT_THROW(run_pure(build_order_finding_circuit(15, 2, 3, Level::Full), std::nullopt, tight), PreconditionError);
  EXPECT_THROW(run_density(build_order_finding_circuit(15, 2, 7, Level::Conceptual), NoiseModel::off()),
               PreconditionError);  // 11 qubits, density cap 10
}

TEST(RunDensity, NoiselessMatchesPureForEveryCompiledCircuit) {
  for (std::uint64_t c : kCoprimes15) {
    for (auto level : {Level::Partial, Level::Full}) {
      const auto circuit = build_order_finding_circuit(15, c, 3, level);
      const auto psi = run_pure(circuit);
      const auto rho = run_density(circuit, NoiseModel::off());
      EXPECT_LT((rho - oracle::outer(psi)).cwiseAbs().maxCoeff(), 1e-10) << c;
    }
  }
}

TEST(RunDensity, ZeroVisibilityRemovesPairEntanglement) {
  const auto c = build_order_finding_circuit(15, 2, 3, Level::Full);
  const auto rho = run_density(c, NoiseModel::uniform(0.0));
  // Fully dephased CNOT on |+>|0> in the (Z control, X target) basis: the
  // input is diagonal there with weight 1/4 each, so the pair ends in I/4.
  for (auto pair : {std::vector<int>{1, 3}, std::vector<int>{2, 4}}) {
    const DensityMatrix p = partial_trace(rho, pair);
    EXPECT_LT((p - oracle::Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(tangle(p), 0.0, 1e-12);
  }
}

TEST(RunDensity, FullDepolarizationMixesEveryActiveQubit) {
  NoiseModel m;
  m.depolarizing_p = 1.0;
  const auto c = build_order_finding_circuit(15, 2, 3, Level::Full);
  const auto rho = run_density(c, m);
  const DensityMatrix active = partial_trace(rho, {1, 2, 3, 4});
  EXPECT_LT((active - oracle::Mat::Identity(16, 16) / 16.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RunDensity, ChannelsStayPhysicalOnTheNoiseGrid) {
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<Circuit> circuits = {build_order_finding_circuit(15, 4, 2, Level::Partial),
                                         build_order_finding_circuit(15, 2, 3, Level::Full),
                                         build_order_finding_circuit(15, 2, 2, Level::Decomposed)};
  for (const auto& c : circuits) {
    for (double v : grid) {
      for (double p : grid) {
        expect_valid_density(run_density(c, NoiseModel::uniform(v, p)),
                             "V=" + std::to_string(v) + " p=" + std::to_string(p));
      }
    }
  }
}

TEST(RunDensity, JointFidelityIsMonotoneInVisibility) {
  for (const auto& c : {build_order_finding_circuit(15, 4, 2, Level::Partial),
                        build_order_finding_circuit(15, 2, 3, Level::Full)}) {
    const auto psi = run_pure(c);
    double last = 1.0 + 1e-12;
    for (double v : {1.0, 0.95, 0.9, 0.85, 0.7, 0.5, 0.25, 0.0}) {
      const double f = fidelity(run_density(c, NoiseModel::uniform(v)), psi);
      EXPECT_LE(f, last + 1e-12) << v;
      last = f;
    }
  }
}

TEST(RunDensity, LayoutPresetAssignsDependentThenIndependentPairs) {
  const auto order_two = layout_noise(build_order_finding_circuit(15, 4, 2, Level::Partial));
  ASSERT_EQ(order_two.gate_visibility.size(), 2U);
  EXPECT_DOUBLE_EQ(order_two.gate_visibility[0], kDependentPairVisibility);
  EXPECT_DOUBLE_EQ(order_two.gate_visibility[1], kIndependentPairVisibility);
  const auto order_four = layout_noise(build_order_finding_circuit(15, 2, 3, Level::Full));
  EXPECT_EQ(order_four.gate_visibility, (std::vector<double>{0.98, 0.98}));
}

TEST(RunDensity, NoiseParametersAreValidated) {
  EXPECT_THROW(NoiseModel::uniform(1.5).validate(), PreconditionError);
  EXPECT_THROW(NoiseModel::uniform(0.9, -0.1).validate(), PreconditionError);
  NoiseModel m;
  m.gate_visibility = {0.9, 2.0};
  EXPECT_THROW(m.validate(), PreconditionError);
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  const auto rho = oracle::outer(bell_on(0, 1, 2));
  EXPECT_LT((partial_trace(rho, {0}) - oracle::Mat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((partial_trace(rho, {0, 1}) - rho).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(partial_trace(rho, {}), PreconditionError);
}

TEST(PartialTrace, MatchesKroneckerFactorsInListedOrder) {
  std::mt19937_64 gen(3);
  const auto a = oracle::random_density(2, gen);
  const auto b = oracle::random_density(4, gen);
  const auto c = oracle::random_density(2, gen);
  const oracle::Mat abc = oracle::kron_all({a, b, c});
  EXPECT_LT((partial_trace(abc, {0}) - a).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((partial_trace(abc, {1, 2}) - b).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((partial_trace(abc, {3, 0}) - oracle::kron(c, a)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(partial_trace(abc, {2}).trace().real(), 1.0, 1e-14);
}

TEST(PartialTrace, OrderFourArgumentIsMaximallyMixedOnActiveRails) {
  const auto c = build_order_finding_circuit(15, 2, 3, Level::Full);
  const auto rho = run_density(c, NoiseModel::off());
  const DensityMatrix arg = partial_trace(rho, {1, 2});
  EXPECT_LT((arg - oracle::Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(partial_trace(rho, {0})(0, 0).real(), 1.0, 1e-12);  // redundant rail stays |0>
  EXPECT_LT((reduced_density(run_pure(c), {1, 2}) - arg).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Measurement, IdealDistributions) {
  const auto two = build_order_finding_circuit(15, 4, 2, Level::Full);
  const auto p2 = register_probabilities(run_pure(two), two.argument_register, two.reverse_argument);
  EXPECT_NEAR(p2[0b00], 0.5, 1e-12);
  EXPECT_NEAR(p2[0b10], 0.5, 1e-12);
  const auto four = build_order_finding_circuit(15, 2, 3, Level::Full);
  const auto p4 = register_probabilities(run_pure(four), four.argument_register, four.reverse_argument);
  for (int s : {0b000, 0b010, 0b100, 0b110}) EXPECT_NEAR(p4[s], 0.25, 1e-12);
  EXPECT_NEAR(std::accumulate(p4.begin(), p4.end(), 0.0), 1.0, 1e-12);
}

TEST(Measurement, SeededSamplingIsReproducible) {
  const auto c = build_order_finding_circuit(15, 2, 3, Level::Full);
  const auto psi = run_pure(c);
  const auto a = measure_logical(psi, c.argument_register, true, 1, 42);
  const auto b = measure_logical(psi, c.argument_register, true, 1, 42);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(std::accumulate(a.counts.begin(), a.counts.end(), std::uint64_t{0}), 1U);
  const auto many = measure_logical(psi, c.argument_register, true, 10000, 5);
  EXPECT_EQ(std::accumulate(many.counts.begin(), many.counts.end(), std::uint64_t{0}), 10000U);
  for (int s : {1, 3, 5, 7}) EXPECT_EQ(many.counts[s], 0U);
  const auto rho_rec = measure_logical(oracle::outer(psi).eval(), c.argument_register, true, 10000, 5);
  EXPECT_EQ(rho_rec.counts, many.counts);
}

TEST(Conditional, IdealFunctionIsDeterminedByArgument) {
  const auto c = build_order_finding_circuit(15, 2, 3, Level::Full);
  const auto rho = run_density(c, NoiseModel::off());
  for (std::uint64_t x = 0; x < 4; ++x) {
    const auto d = conditional_function_distribution(rho, {1, 2}, {3, 4}, x);
    EXPECT_NEAR(d[x % 4], 1.0, 1e-12);
  }
  const auto two = build_order_finding_circuit(15, 4, 2, Level::Full);
  const auto d = conditional_function_distribution(run_density(two, NoiseModel::off()), {1}, {2}, 1);
  EXPECT_NEAR(d[1], 1.0, 1e-12);
  EXPECT_THROW(conditional_function_distribution(rho, {0}, {3}, 1), PreconditionError);
}

TEST(Conditional, NoiseLowersTheMaximum) {
  const auto c = build_order_finding_circuit(15, 2, 3, Level::Full);
  const auto rho = run_density(c, NoiseModel::uniform(0.85));
  for (std::uint64_t x = 0; x < 4; ++x) {
    const auto d = conditional_function_distribution(rho, {1, 2}, {3, 4}, x);
    EXPECT_LT(*std::max_element(d.begin(), d.end()), 1.0 - 1e-6);
  }
}

TEST(Postselection, YieldIsProductOfGateSuccesses) {
  EXPECT_NEAR(postselection_yield(build_order_finding_circuit(15, 2, 3, Level::Full), NoiseModel::off()), 1.0 / 9,
              1e-15);
  Circuit none;
  none.width = 2;
  none.argument_register = {0};
  none.function_register = {1};
  none.gates = {Gate::h(0), Gate::x(1)};
  EXPECT_DOUBLE_EQ(postselection_yield(none, NoiseModel::off()), 1.0);
  // Direct six-qubit order-4 encoding: one three-qubit and five two-qubit gates.
  Circuit direct;
  direct.width = 6;
  direct.argument_register = {0, 1};
  direct.function_register = {2, 3, 4, 5};
  direct.gates = {Gate::cswap(0, 2, 3), Gate::cnot(1, 2), Gate::cnot(1, 3), Gate::cnot(0, 4),
                  Gate::cnot(0, 5), Gate::cnot(1, 5)};
  const double y = postselection_yield(direct, NoiseModel::off());
  EXPECT_NEAR(y, std::pow(1.0 / 3, 7), 1e-15);
  EXPECT_LT(y, 1e-3);
}
