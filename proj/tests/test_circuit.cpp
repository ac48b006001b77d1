#include "oracle.hpp"

#include "shorlab/builder.hpp"
#include "shorlab/circuit_io.hpp"
#include "shorlab/compiler.hpp"
#include "shorlab/gates.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace shorlab;

namespace {

double unitarity_error(const ComplexMatrix<double>& u) {
  return (u.adjoint() * u - ComplexMatrix<double>::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

std::size_t count_gates(const Circuit& c, GateKind kind) {
  return static_cast<std::size_t>(
      std::count_if(c.gates.begin(), c.gates.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

bool has_trivial_power(const Circuit& c) {
  return std::any_of(c.gates.begin(), c.gates.end(),
                     [](const Gate& g) { return g.kind == GateKind::ControlledU && g.multiplier.factor() == 1; });
}

}  // namespace

TEST(Gates, EveryGateMatrixIsUnitary) {
  const std::vector<Gate> gates = {Gate::h(0),         Gate::x(0),         Gate::t(0),       Gate::cnot(0, 1),
                                   Gate::cz(0, 1),     Gate::cr(0, 1, 1),  Gate::cr(1, 0, 3), Gate::swap(0, 1),
                                   Gate::cswap(0, 1, 2)};
  for (const auto& g : gates) EXPECT_LT(unitarity_error(gate_matrix<double>(g)), 1e-12) << to_string(g);
  for (std::uint64_t c : {2, 4, 7, 8, 11, 13, 14}) {
    for (int j = 0; j < 3; ++j) {
      const auto u = gate_matrix<double>(Gate::controlled_u(0, {1, 2, 3, 4}, {c, 15, j}));
      EXPECT_LT(unitarity_error(u), 1e-12);
    }
  }
}

TEST(Gates, ControlledUIsAPermutationMatchingModularMultiplication) {
  for (std::uint64_t c : {2, 4, 7, 11}) {
    for (int j = 0; j < 3; ++j) {
      const auto u = gate_matrix<double>(Gate::controlled_u(0, {1, 2, 3, 4}, {c, 15, j}));
      std::uint64_t factor = 1;
      for (int k = 0; k < (1 << j); ++k) factor = factor * c % 15;
      const auto expected = oracle::permutation(5, [&](std::uint64_t x) {
        const std::uint64_t y = x & 15U;
        if (!(x & 16U) || y >= 15) return x;
        return (x & 16U) | (factor * y % 15);
      });
      EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-15) << c << " " << j;
      for (Eigen::Index r = 0; r < u.rows(); ++r) EXPECT_EQ((u.row(r).cwiseAbs().array() > 0.5).count(), 1);
    }
  }
}

TEST(Gates, CircuitUnitaryBasics) {
  Circuit one;
  one.width = 2;
  one.argument_register = {0};
  one.function_register = {1};
  one.function_input = 0;
  one.gates = {Gate::h(0)};
  const auto u = circuit_unitary<double>(one);
  EXPECT_NEAR(u(0, 0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(u(2, 0).real(), 1 / std::sqrt(2.0), 1e-15);  // H on the top rail of |00>

  Circuit two;
  two.width = 2;
  two.argument_register = {0};
  two.function_register = {1};
  two.function_input = 0;
  two.gates = {Gate::cnot(0, 1)};
  const auto v = circuit_unitary<double>(two);
  EXPECT_NEAR(std::abs(v(3, 2)), 1.0, 1e-15);  // |10> -> |11>
}

TEST(Gates, FullOrderTwoCircuitMatchesHandProduct) {
  const auto c = build_order_finding_circuit(15, 4, 2, Level::Full);
  ASSERT_EQ(c.width, 3);
  const oracle::Mat expected = oracle::cnot(1, 2, 3) * oracle::on(oracle::hadamard(), 1, 3);
  const auto u = circuit_unitary<double>(c);
  EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(unitarity_error(u), 1e-12);
}

TEST(Gates, InverseQftMarkerIsTheBitReversedInverseDft) {
  for (int n = 1; n <= 5; ++n) {
    Circuit c;
    c.width = n + 1;
    for (int q = 0; q < n; ++q) c.argument_register.push_back(q);
    c.function_register = {n};
    c.function_input = 0;
    c.gates = {Gate::inverse_qft(c.argument_register)};
    const auto u = circuit_unitary<double>(c);
    const auto rev = oracle::permutation(n, [n](std::uint64_t x) { return oracle::reverse_bits(x, n); });
    const oracle::Mat expected = oracle::kron(rev * oracle::inverse_dft(n), oracle::id2());
    EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
  }
}

TEST(Gates, UnitaryCapIsEnforced) {
  Circuit c;
  c.width = 11;
  c.argument_register = {0};
  c.function_register = {1};
  EXPECT_THROW(circuit_unitary<double>(c), PreconditionError);
}

TEST(Builder, ConceptualMinimalInstance) {
  const auto c = build_order_finding_circuit(15, 4, 1, Level::Conceptual);
  ASSERT_EQ(c.gates.size(), 3U);
  EXPECT_EQ(c.gates[0], Gate::h(0));
  EXPECT_EQ(c.gates[1].kind, GateKind::ControlledU);
  EXPECT_EQ(c.gates[1].multiplier.base, 4U);
  EXPECT_EQ(c.gates[1].multiplier.power, 0);
  EXPECT_EQ(c.gates[2].kind, GateKind::InverseQft);
  EXPECT_EQ(c.function_register.size(), 4U);
  EXPECT_EQ(c.function_input, 1U);
}

TEST(Builder, FullLevelShapes) {
  const auto f = build_order_finding_circuit(15, 4, 3, Level::Full);
  EXPECT_EQ(f.function_register.size(), 1U);
  EXPECT_EQ(count_gates(f, GateKind::H), 1U);
  EXPECT_EQ(count_gates(f, GateKind::CNOT), 1U);
  EXPECT_EQ(f.gates.size(), 2U);

  const auto g = build_order_finding_circuit(15, 2, 3, Level::Full);
  EXPECT_EQ(g.function_register.size(), 2U);
  EXPECT_EQ(count_gates(g, GateKind::CNOT), 2U);
  std::vector<int> controls;
  for (const auto& gate : g.gates)
    if (gate.kind == GateKind::CNOT) controls.push_back(gate.qubits[0]);
  std::sort(controls.begin(), controls.end());
  EXPECT_EQ(controls, (std::vector<int>{1, 2}));
}

TEST(Builder, RejectsBadInputs) {
  EXPECT_THROW(build_order_finding_circuit(15, 5, 3, Level::Conceptual), PreconditionError);
  EXPECT_THROW(build_order_finding_circuit(15, 1, 3, Level::Conceptual), PreconditionError);
  EXPECT_THROW(build_order_finding_circuit(21, 2, 3, Level::Full), PreconditionError);
  EXPECT_THROW(build_order_finding_circuit(21, 2, 3, Level::Decomposed), PreconditionError);
  EXPECT_THROW(build_order_finding_circuit(21, 2, 10, Level::Conceptual), PreconditionError);  // width 15
}

TEST(Builder, DecomposedContainsRedundantGatesThatCompilationRemoves) {
  for (std::uint64_t c : {4, 2}) {
    const auto d = build_order_finding_circuit(15, c, 3, Level::Decomposed);
    // Trivial powers (4^2, 4^4, 2^4 = 1 mod 15) and the top-rail Hadamard of
    // the register wall, which meets the first inverse-QFT Hadamard.
    EXPECT_TRUE(has_trivial_power(d)) << c;
    EXPECT_EQ(d.gates.front(), Gate::h(0));
    EXPECT_GT(count_gates(d, GateKind::CR), 0U);

    const auto out = run_pipeline(d, OrderProfile::compute(c, 15)).output;
    EXPECT_FALSE(has_trivial_power(out));
    EXPECT_EQ(count_gates(out, GateKind::CR), 0U);
    EXPECT_EQ(count_gates(out, GateKind::CSWAP), 0U);
    EXPECT_FALSE(std::any_of(out.gates.begin(), out.gates.end(), [](const Gate& g) { return g.touches(0); }));
  }
}

TEST(CircuitIo, RoundTrip) {
  for (auto level : {Level::Conceptual, Level::Decomposed, Level::Partial, Level::Full}) {
    const auto c = build_order_finding_circuit(15, 2, 3, level);
    const auto text = serialize_circuit(c);
    EXPECT_EQ(parse_circuit(text), c) << text;
    EXPECT_EQ(serialize_circuit(parse_circuit(text)), text);
  }
}

TEST(CircuitIo, AcceptsMixedCaseAndComments) {
  const auto c = parse_circuit(
      "# comment\n"
      "CIRCUIT width=3 arg=[0,1] func=[2]  finit=0\n"
      "H 1\n"
      "\n"
      "CNOT 1 2   # copy\n"
      "Measure arg Reversed\n");
  EXPECT_EQ(c.width, 3);
  EXPECT_EQ(c.gates.size(), 2U);
  EXPECT_TRUE(c.reverse_argument);
  EXPECT_EQ(serialize_circuit(c), "circuit width=3 arg=[0,1] func=[2] finit=0\nh 1\ncnot 1 2\nmeasure arg reversed\n");
}

TEST(CircuitIo, Diagnostics) {
  auto line_of = [](const std::string& text, const std::string& needle) {
    try {
      parse_circuit(text);
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
      return e.line();
    }
    ADD_FAILURE() << "no error for: " << text;
    return -1;
  };
  EXPECT_EQ(line_of("circuit width=2 arg=[0] func=[1]\ncnot 0 0\n", "identical control/target"), 2);
  EXPECT_EQ(line_of("circuit width=3 arg=[0,1] func=[1,2]\n", "register overlap"), 1);
  EXPECT_EQ(line_of("circuit width=2 arg=[0] func=[1]\nh 5\n", "out of range"), 2);
  EXPECT_EQ(line_of("circuit width=2 arg=[0] func=[1]\nfoo 1\n", "unknown gate"), 2);
  EXPECT_EQ(line_of("h 0\n", "header"), 1);
  EXPECT_EQ(line_of("circuit width=2 arg=[0] func=[1]\nh x\n", "expected integer"), 2);
  EXPECT_EQ(line_of("circuit width=2 arg=[0] func=[1]\nmeasure arg\nh 0\n", "follow"), 3);
  EXPECT_EQ(line_of("circuit width=3 arg=[0] func=[1,2]\ncswap 0 1\n", "operands"), 2);
}

TEST(CircuitIo, MissingFileIsAParseError) { EXPECT_THROW(load_circuit("/nonexistent/x.circ"), ParseError); }
