#pragma once

#include "shorlab/circuit.hpp"
#include "shorlab/gates.hpp"
#include "shorlab/number_theory.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shorlab {

enum class Reason { HadamardPair, TrivialPower, FixedInputSpecialization, LogRecode, DeadQubit, QftElision };

std::string_view reason_name(Reason r);

enum class EquivalenceScope { FullUnitary, ArgumentDistribution, RestrictedInput };

std::string_view scope_name(EquivalenceScope s);

struct EquivalenceResult {
  bool equivalent = false;
  double max_deviation = 0.0;
  EquivalenceScope scope = EquivalenceScope::FullUnitary;
};

/// Compares two circuits on `scope`:
///  - FullUnitary: unitaries up to a global phase fixed by the first nonzero entry of c1.
///  - ArgumentDistribution: logical argument-register distributions (declared
///    reversal applied), each circuit run from its own function input.
///  - RestrictedInput: output states on every |x>|function input>.
/// Throws PreconditionError when the compared registers differ in width or a
/// circuit exceeds the dense caps.
EquivalenceResult equivalence_check(const Circuit& c1, const Circuit& c2, EquivalenceScope scope,
                                    double tolerance = 1e-10, const DenseLimits& limits = default_limits());

struct Removal {
  std::size_t index = 0;  // gate index in the pass input
  Reason reason = Reason::HadamardPair;
};

struct Rewrite {
  std::size_t index = 0;
  Gate old_gate;
  std::vector<Gate> new_gates;
  Reason reason = Reason::FixedInputSpecialization;
};

struct CompilationPassResult {
  std::string pass_name;
  Circuit output;
  std::vector<Removal> removed;
  std::vector<Rewrite> rewritten;
  bool applicable = true;
  std::vector<std::string> notes;
  /// Self-check on the pass's declared scope; empty when nothing changed or
  /// the circuit is above the dense caps.
  std::optional<EquivalenceResult> check;

  bool changed() const { return !removed.empty() || !rewritten.empty(); }
};

CompilationPassResult cancel_adjacent_inverses(const Circuit& c);
CompilationPassResult remove_trivial_controlled_powers(const Circuit& c, const OrderProfile& profile);
CompilationPassResult eliminate_dead_qubit_gates(const Circuit& c, const OrderProfile& profile);
/// With `force`, the inverse-QFT region is dropped even when r is not a power
/// of two (used as a negative control; the self-check is then expected to fail
/// and is reported, not thrown).
CompilationPassResult elide_inverse_qft(const Circuit& c, const OrderProfile& profile, bool force = false);
CompilationPassResult specialize_cswap_to_cnot(const Circuit& c);
CompilationPassResult recode_function_register(const Circuit& c, const OrderProfile& profile);

/// Pipeline pass names in their fixed order.
const std::vector<std::string>& pipeline_pass_names();

CompilationPassResult run_pass(std::string_view name, const Circuit& c, const OrderProfile& profile);

struct PipelineResult {
  Circuit output;
  std::vector<CompilationPassResult> passes;  // changing passes, in application order
  int sweeps = 0;  // pass-list restarts, at most 32
};

/// Runs the selected passes (all by default) in pipeline order, restarting
/// from the first pass after every change, until none applies. Throws UnsoundPassError when a pass fails its self-check.
PipelineResult run_pipeline(const Circuit& c, const OrderProfile& profile,
                            const std::vector<std::string>& passes = pipeline_pass_names());

}  // namespace shorlab
