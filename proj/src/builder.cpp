#include "shorlab/builder.hpp"

#include "shorlab/errors.hpp"
#include "shorlab/number_theory.hpp"

#include <algorithm>
#include <array>

namespace shorlab {

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Conceptual: return "conceptual";
    case Level::Decomposed: return "decomposed";
    case Level::Partial: return "partial";
    case Level::Full: return "full";
  }
  return "?";
}

std::optional<Level> parse_level(std::string_view name) {
  for (Level l : {Level::Conceptual, Level::Decomposed, Level::Partial, Level::Full}) {
    if (level_name(l) == name) return l;
  }
  return std::nullopt;
}

int default_argument_width(std::uint64_t n, std::uint64_t c) {
  const auto profile = OrderProfile::compute(c, n);
  if (profile.log2_order) return *profile.log2_order + 1;
  return 2 * ceil_log2(n);
}

namespace {

using SwapPair = std::array<int, 2>;

// Multiplication by 2^k mod 15 is a left rotation of the four function bits
// (top rail first); these adjacent/transposition swaps realise it.
std::vector<SwapPair> rotation_swaps(int k) {
  switch (k) {
    case 1: return {{0, 1}, {1, 2}, {2, 3}};
    case 2: return {{1, 3}, {0, 2}};
    case 3: return {{2, 3}, {1, 2}, {0, 1}};
    default: return {};
  }
}

struct Mod15Multiplier {
  int rotation = 0;
  bool complement = false;
};

// M = s * 2^k mod 15 with s = +-1; every unit mod 15 has this form.
Mod15Multiplier decompose_mod15(std::uint64_t factor) {
  for (int k = 0; k < 4; ++k) {
    const std::uint64_t p = std::uint64_t{1} << k;
    if (p % 15 == factor) return {k, false};
    if ((15 - p) % 15 == factor) return {k, true};
  }
  throw PreconditionError("multiplier is not a unit mod 15");
}

void add_measurement(Circuit& c) {
  c.measure_argument = true;
  c.reverse_argument = true;
}

Circuit base_circuit(int n_arg, int m) {
  Circuit c;
  c.width = n_arg + m;
  for (int i = 0; i < n_arg; ++i) c.argument_register.push_back(i);
  for (int i = 0; i < m; ++i) c.function_register.push_back(n_arg + i);
  c.function_input = 1;
  return c;
}

// Emits the controlled multiplication by `factor` mod 15. With `known` set,
// CSWAPs acting on function bits of known value are specialised (dropped when
// equal, CNOT pair when different) and the knowledge is updated.
void emit_mod15(Circuit& c, int control, std::uint64_t factor,
                std::vector<std::optional<bool>>* known) {
  const auto dec = decompose_mod15(factor);
  const auto& f = c.function_register;
  for (const auto& [a, b] : rotation_swaps(dec.rotation)) {
    if (known != nullptr) {
      auto& ka = (*known)[a];
      auto& kb = (*known)[b];
      if (ka && kb && *ka == *kb) continue;
      if (ka && kb) {
        c.gates.push_back(Gate::cnot(control, f[a]));
        c.gates.push_back(Gate::cnot(control, f[b]));
      } else {
        c.gates.push_back(Gate::cswap(control, f[a], f[b]));
      }
      ka.reset();
      kb.reset();
    } else {
      c.gates.push_back(Gate::cswap(control, f[a], f[b]));
    }
  }
  if (dec.complement) {
    for (std::size_t t = 0; t < f.size(); ++t) {
      c.gates.push_back(Gate::cnot(control, f[t]));
      if (known != nullptr) (*known)[t].reset();
    }
  }
}

}  // namespace

Circuit build_order_finding_circuit(std::uint64_t n_mod, std::uint64_t c_base, int n_arg, Level level,
                                    const DenseLimits& limits) {
  const auto profile = OrderProfile::compute(c_base, n_mod);
  if (n_arg < 1) throw PreconditionError("argument width must be at least 1");
  const int m = ceil_log2(n_mod);

  if ((level == Level::Decomposed || level == Level::Partial) && n_mod != 15) {
    throw PreconditionError("the " + std::string(level_name(level)) +
                            " level decomposes multipliers for N=15 only");
  }
  if ((level == Level::Full || level == Level::Partial) && !profile.power_of_two_order()) {
    throw PreconditionError("the " + std::string(level_name(level)) + " level requires r = 2^l (r = " +
                            std::to_string(profile.order) + ")");
  }

  Circuit c;
  switch (level) {
    case Level::Conceptual: {
      c = base_circuit(n_arg, m);
      for (int i = 0; i < n_arg; ++i) c.gates.push_back(Gate::h(i));
      for (int j = 0; j < n_arg; ++j) {
        c.gates.push_back(Gate::controlled_u(n_arg - 1 - j, c.function_register,
                                             ModularMultiplier{c_base, n_mod, j}));
      }
      c.gates.push_back(Gate::inverse_qft(c.argument_register));
      break;
    }
    case Level::Decomposed: {
      c = base_circuit(n_arg, m);
      for (int i = 0; i < n_arg; ++i) c.gates.push_back(Gate::h(i));
      for (int j = 0; j < n_arg; ++j) {
        const ModularMultiplier mul{c_base, n_mod, j};
        // Powers equal to the identity stay as ControlledU gates for the
        // trivial-power pass to remove.
        if (mul.factor() == 1) {
          c.gates.push_back(Gate::controlled_u(n_arg - 1 - j, c.function_register, mul));
          continue;
        }
        emit_mod15(c, n_arg - 1 - j, mul.factor(), nullptr);
      }
      auto qft = inverse_qft_gates(c.argument_register);
      c.gates.insert(c.gates.end(), qft.begin(), qft.end());
      break;
    }
    case Level::Partial: {
      c = base_circuit(n_arg, m);
      const int l = *profile.log2_order;
      const int low = std::max(0, n_arg - l);
      for (int i = low; i < n_arg; ++i) c.gates.push_back(Gate::h(i));
      std::vector<std::optional<bool>> known(m);
      for (int t = 0; t < m; ++t) known[t] = ((c.function_input >> (m - 1 - t)) & 1U) != 0;
      for (int j = 0; j < std::min(n_arg, l); ++j) {
        const ModularMultiplier mul{c_base, n_mod, j};
        if (mul.factor() == 1) continue;
        emit_mod15(c, n_arg - 1 - j, mul.factor(), &known);
      }
      break;
    }
    case Level::Full: {
      const int l = *profile.log2_order;
      c = base_circuit(n_arg, l);
      c.function_input = 0;
      const int bits = std::min(n_arg, l);
      for (int i = n_arg - bits; i < n_arg; ++i) c.gates.push_back(Gate::h(i));
      for (int b = bits - 1; b >= 0; --b) c.gates.push_back(Gate::cnot(n_arg - 1 - b, n_arg + l - 1 - b));
      break;
    }
  }
  add_measurement(c);
  if (c.width > limits.state_qubits) {
    throw PreconditionError("circuit width " + std::to_string(c.width) + " exceeds the state-vector cap of " +
                            std::to_string(limits.state_qubits) + " qubits");
  }
  c.validate();
  return c;
}

}  // namespace shorlab
