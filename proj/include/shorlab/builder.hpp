#pragma once

#include "shorlab/circuit.hpp"
#include "shorlab/gates.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace shorlab {

enum class Level { Conceptual, Decomposed, Partial, Full };

std::string_view level_name(Level level);
std::optional<Level> parse_level(std::string_view name);

/// Argument width used when the caller does not pick one: one redundant
/// rail above the l order bits when r = 2^l, otherwise 2 ceil(log2 N).
int default_argument_width(std::uint64_t n, std::uint64_t c);

/// Order-finding circuit for (N, C) with an n-qubit argument register.
///
/// Layout: argument qubits 0..n-1 (qubit 0 on top, controlling the highest
/// power), function qubits n..n+m-1. Every level ends with a logical
/// measurement of the argument register read in reversed order.
///
///  - Conceptual: Hadamard wall, ControlledU(j) on qubit n-1-j for every j,
///    inverse-QFT marker. m = ceil(log2 N), function input y = 1.
///  - Decomposed (N = 15 only): Hadamard wall, each non-trivial power as
///    CSWAP rotations of the function bits (plus a CNOT complement when
///    C^(2^j) = -2^k mod 15), trivial powers kept as identity ControlledU
///    gates, explicit inverse QFT.
///  - Partial (N = 15 only): the decomposed circuit after redundant-gate
///    removal and QFT elision, with CSWAPs on known function values turned
///    into CNOT pairs or dropped.
///  - Full (r = 2^l): the function register holds a = x mod r in l qubits,
///    copied from the l low argument qubits by CNOTs; input a = 0.
///
/// Throws PreconditionError for non-co-prime C, unsupported N for the level,
/// or a width above the state-vector cap.
Circuit build_order_finding_circuit(std::uint64_t n_mod, std::uint64_t c, int n_arg, Level level,
                                    const DenseLimits& limits = default_limits());

}  // namespace shorlab
