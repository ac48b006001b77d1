#pragma once

// Line-oriented circuit text format.
//
//   # comment
//   circuit width=7 arg=[0,1,2] func=[3,4,5,6] finit=1
//   h 0
//   cnot 2 5
//   cswap 1 4 6
//   cr 0 2 3
//   cu c=4 n=15 j=0 ctrl=2 func=[3,4,5,6]
//   iqft [0,1,2]
//   measure arg reversed
//
// Keywords are case-insensitive on input. `finit` (function register input,
// top rail first) defaults to 1 and is only written when it differs. The
// serializer emits lowercase keywords separated by single spaces.

#include "shorlab/circuit.hpp"

#include <string>
#include <string_view>

namespace shorlab {

/// Throws ParseError with the offending line number.
Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit& c);

Circuit load_circuit(const std::string& path);

}  // namespace shorlab
