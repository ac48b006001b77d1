#include "shorlab/compiler.hpp"

#include "shorlab/errors.hpp"
#include "shorlab/sim.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace shorlab {

std::string_view reason_name(Reason r) {
  switch (r) {
    case Reason::HadamardPair: return "hadamard-pair";
    case Reason::TrivialPower: return "trivial-power";
    case Reason::FixedInputSpecialization: return "fixed-input-specialization";
    case Reason::LogRecode: return "log-recode";
    case Reason::DeadQubit: return "dead-qubit";
    case Reason::QftElision: return "qft-elision";
  }
  return "?";
}

std::string_view scope_name(EquivalenceScope s) {
  switch (s) {
    case EquivalenceScope::FullUnitary: return "full-unitary";
    case EquivalenceScope::ArgumentDistribution: return "argument-distribution";
    case EquivalenceScope::RestrictedInput: return "restricted-input";
  }
  return "?";
}

namespace {

// Basis index with argument value x (register order, top first) and the
// circuit's function input.
std::uint64_t argument_input(const Circuit& c, std::uint64_t x) {
  std::uint64_t idx = c.input_index();
  const int n = static_cast<int>(c.argument_register.size());
  for (int b = 0; b < n; ++b) {
    if ((x >> (n - 1 - b)) & 1U) idx |= std::uint64_t{1} << bit_position(c.argument_register[b], c.width);
  }
  return idx;
}

std::uint64_t read_register(std::uint64_t idx, const std::vector<int>& reg, int width) {
  std::uint64_t v = 0;
  for (int q : reg) v = (v << 1) | (bit_of(idx, q, width) ? 1U : 0U);
  return v;
}

std::uint64_t write_register(std::uint64_t idx, const std::vector<int>& reg, int width, std::uint64_t v) {
  const int m = static_cast<int>(reg.size());
  for (int b = 0; b < m; ++b) {
    const std::uint64_t bit = std::uint64_t{1} << bit_position(reg[b], width);
    idx = ((v >> (m - 1 - b)) & 1U) ? (idx | bit) : (idx & ~bit);
  }
  return idx;
}

// Action of a classical gate on a basis index.
std::uint64_t classical_step(const Gate& g, std::uint64_t idx, int width) {
  auto bit = [&](int q) { return bit_of(idx, q, width); };
  auto flip = [&](int q) { idx ^= std::uint64_t{1} << bit_position(q, width); };
  switch (g.kind) {
    case GateKind::X: flip(g.qubits[0]); break;
    case GateKind::CNOT:
      if (bit(g.qubits[0])) flip(g.qubits[1]);
      break;
    case GateKind::SWAP:
      if (bit(g.qubits[0]) != bit(g.qubits[1])) {
        flip(g.qubits[0]);
        flip(g.qubits[1]);
      }
      break;
    case GateKind::CSWAP:
      if (bit(g.qubits[0]) && bit(g.qubits[1]) != bit(g.qubits[2])) {
        flip(g.qubits[1]);
        flip(g.qubits[2]);
      }
      break;
    case GateKind::ControlledU: {
      if (!bit(g.qubits[0])) break;
      const std::vector<int> f(g.qubits.begin() + 1, g.qubits.end());
      const std::uint64_t y = read_register(idx, f, width);
      if (y < g.multiplier.modulus) idx = write_register(idx, f, width, mul_mod(g.multiplier.factor(), y, g.multiplier.modulus));
      break;
    }
    default: throw PreconditionError("gate " + to_string(g) + " is not classical");
  }
  return idx;
}

bool touches_any(const Gate& g, const std::vector<int>& qs) {
  return std::any_of(qs.begin(), qs.end(), [&](int q) { return g.touches(q); });
}

// One past the last gate touching the function register; 0 if none does.
std::size_t function_boundary(const Circuit& c) {
  std::size_t end = 0;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (touches_any(c.gates[i], c.function_register)) end = i + 1;
  }
  return end;
}

CompilationPassResult unchanged(std::string name, const Circuit& c) {
  CompilationPassResult r;
  r.pass_name = std::move(name);
  r.output = c;
  return r;
}

// Builds the output from the kept gates and attaches the declared-scope check.
void finish(CompilationPassResult& r, const Circuit& input, EquivalenceScope scope) {
  if (!r.changed()) return;
  r.output.validate();
  try {
    r.check = equivalence_check(input, r.output, scope);
  } catch (const PreconditionError& e) {
    r.notes.push_back(std::string("self-check skipped: ") + e.what());
  }
}

double one_probability(const StateVector& psi, int q, int width) {
  double p = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (bit_of(static_cast<std::size_t>(i), q, width)) p += std::norm(psi(i));
  }
  return p;
}

}  // namespace

EquivalenceResult equivalence_check(const Circuit& c1, const Circuit& c2, EquivalenceScope scope, double tolerance,
                                    const DenseLimits& limits) {
  EquivalenceResult res;
  res.scope = scope;
  switch (scope) {
    case EquivalenceScope::FullUnitary: {
      if (c1.width != c2.width) throw PreconditionError("full-unitary check needs equal circuit widths");
      const auto u1 = circuit_unitary(c1, limits);
      const auto u2 = circuit_unitary(c2, limits);
      Eigen::Index r0 = 0, c0 = 0;
      // First entry of u1 with a clearly nonzero modulus fixes the phase.
      for (Eigen::Index j = 0; j < u1.cols(); ++j) {
        bool found = false;
        for (Eigen::Index i = 0; i < u1.rows(); ++i) {
          if (std::abs(u1(i, j)) > 1e-6) {
            r0 = i;
            c0 = j;
            found = true;
            break;
          }
        }
        if (found) break;
      }
      Complex phase(1.0);
      if (std::abs(u2(r0, c0)) > 1e-12) {
        phase = u2(r0, c0) / u1(r0, c0);
        phase /= std::abs(phase);
      }
      res.max_deviation = (u1 * phase - u2).cwiseAbs().maxCoeff();
      break;
    }
    case EquivalenceScope::ArgumentDistribution: {
      if (c1.argument_register.size() != c2.argument_register.size()) {
        throw PreconditionError("argument registers differ in width (" + std::to_string(c1.argument_register.size()) +
                                " vs " + std::to_string(c2.argument_register.size()) + ")");
      }
      const auto p1 = register_probabilities(run_pure(c1, std::nullopt, limits), c1.argument_register,
                                             c1.reverse_argument);
      const auto p2 = register_probabilities(run_pure(c2, std::nullopt, limits), c2.argument_register,
                                             c2.reverse_argument);
      for (std::size_t i = 0; i < p1.size(); ++i) res.max_deviation = std::max(res.max_deviation, std::abs(p1[i] - p2[i]));
      break;
    }
    case EquivalenceScope::RestrictedInput: {
      if (c1.width != c2.width || c1.argument_register != c2.argument_register ||
          c1.function_input != c2.function_input || c1.function_register.size() != c2.function_register.size()) {
        throw PreconditionError("restricted-input check needs identical register layouts");
      }
      const std::uint64_t count = std::uint64_t{1} << c1.argument_register.size();
      for (std::uint64_t x = 0; x < count; ++x) {
        const auto in = argument_input(c1, x);
        const auto d = (run_pure(c1, in, limits) - run_pure(c2, in, limits)).cwiseAbs().maxCoeff();
        res.max_deviation = std::max(res.max_deviation, d);
      }
      break;
    }
  }
  res.equivalent = res.max_deviation < tolerance;
  return res;
}

CompilationPassResult cancel_adjacent_inverses(const Circuit& c) {
  CompilationPassResult r = unchanged("hadamard-pair", c);
  std::vector<std::size_t> alive(c.gates.size());
  std::iota(alive.begin(), alive.end(), std::size_t{0});
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t a = 0; a < alive.size() && !progress; ++a) {
      const Gate& g = c.gates[alive[a]];
      if (!g.self_inverse()) continue;
      for (std::size_t b = a + 1; b < alive.size(); ++b) {
        const Gate& h = c.gates[alive[b]];
        if (!touches_any(h, g.qubits)) continue;
        if (h.same_operator(g)) {
          r.removed.push_back({alive[a], Reason::HadamardPair});
          r.removed.push_back({alive[b], Reason::HadamardPair});
          alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(b));
          alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(a));
          progress = true;
        }
        break;
      }
    }
  }
  r.output.gates.clear();
  for (std::size_t i : alive) r.output.gates.push_back(c.gates[i]);
  std::sort(r.removed.begin(), r.removed.end(), [](const Removal& x, const Removal& y) { return x.index < y.index; });
  finish(r, c, EquivalenceScope::FullUnitary);
  return r;
}

CompilationPassResult remove_trivial_controlled_powers(const Circuit& c, const OrderProfile& profile) {
  CompilationPassResult r = unchanged("trivial-power", c);
  r.output.gates.clear();
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::ControlledU && g.multiplier.factor() == 1) {
      r.removed.push_back({i, Reason::TrivialPower});
    } else {
      r.output.gates.push_back(g);
    }
  }
  if (r.changed() && (profile.modulus != 0)) {
    r.notes.push_back("order r = " + std::to_string(profile.order));
  }
  finish(r, c, EquivalenceScope::FullUnitary);
  return r;
}

CompilationPassResult eliminate_dead_qubit_gates(const Circuit& c, const OrderProfile& profile) {
  (void)profile;
  CompilationPassResult r = unchanged("dead-qubit", c);
  if (c.width > default_limits().state_qubits) {
    r.notes.push_back("circuit above the state-vector cap; pass skipped");
    return r;
  }
  // Work on the expanded gate list, remembering where each gate came from.
  struct Item {
    Gate gate;
    std::size_t origin;
    bool from_marker;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (c.gates[i].kind == GateKind::InverseQft) {
      for (const Gate& e : inverse_qft_gates(c.gates[i].qubits)) items.push_back({e, i, true});
    } else {
      items.push_back({c.gates[i], i, false});
    }
  }
  Circuit flat = expand_markers(c);
  const std::size_t boundary = function_boundary(flat);
  if (boundary == flat.gates.size()) {
    r.notes.push_back("no gates after the modular exponentiation");
    return r;
  }

  StateVector psi = run_pure_prefix(flat, boundary);
  const StateVector at_boundary = psi;
  std::vector<bool> drop(items.size(), false);
  for (std::size_t i = boundary; i < items.size(); ++i) {
    const Gate& g = items[i].gate;
    bool dead = false;
    switch (g.kind) {
      case GateKind::CNOT:
      case GateKind::CSWAP:
      case GateKind::ControlledU: dead = one_probability(psi, g.qubits[0], c.width) < 1e-12; break;
      case GateKind::CZ:
      case GateKind::CR:
        dead = one_probability(psi, g.qubits[0], c.width) < 1e-12 || one_probability(psi, g.qubits[1], c.width) < 1e-12;
        break;
      default: break;
    }
    if (dead) {
      drop[i] = true;
    } else {
      apply_gate(psi, g, c.width);
    }
  }

  // Argument qubits that are maximally mixed and split off as I/2^|S|.
  std::vector<int> mixed;
  for (int q : c.argument_register) {
    const auto rho = reduced_density(at_boundary, {q});
    if ((rho - DensityMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-10) mixed.push_back(q);
  }
  if (!mixed.empty()) {
    std::vector<int> rest;
    for (int q : c.argument_register) {
      if (std::find(mixed.begin(), mixed.end(), q) == mixed.end()) rest.push_back(q);
    }
    std::vector<int> order = mixed;
    order.insert(order.end(), rest.begin(), rest.end());
    const auto joint = reduced_density(at_boundary, order);
    const Eigen::Index ds = Eigen::Index{1} << mixed.size();
    DensityMatrix expected = DensityMatrix::Identity(ds, ds) / static_cast<double>(ds);
    if (!rest.empty()) expected = kron(expected, reduced_density(at_boundary, rest));
    if ((joint - expected).cwiseAbs().maxCoeff() > 1e-10) mixed.clear();
  }
  if (!mixed.empty()) {
    bool confined = true;
    for (std::size_t i = boundary; i < items.size(); ++i) {
      if (drop[i] || !touches_any(items[i].gate, mixed)) continue;
      for (int q : items[i].gate.qubits) {
        if (std::find(mixed.begin(), mixed.end(), q) == mixed.end()) confined = false;
      }
    }
    if (confined) {
      for (std::size_t i = boundary; i < items.size(); ++i) {
        if (touches_any(items[i].gate, mixed)) drop[i] = true;
      }
    } else {
      r.notes.push_back("maximally mixed qubits interact with the rest after the boundary");
    }
  }

  if (std::none_of(drop.begin(), drop.end(), [](bool d) { return d; })) return r;

  r.output.gates.clear();
  std::map<std::size_t, std::vector<Gate>> marker_survivors;
  std::set<std::size_t> touched_markers;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    if (it.from_marker) {
      if (drop[i]) touched_markers.insert(it.origin);
      if (!drop[i]) marker_survivors[it.origin].push_back(it.gate);
      continue;
    }
    if (drop[i]) {
      r.removed.push_back({it.origin, Reason::DeadQubit});
    }
  }
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::InverseQft) {
      if (!touched_markers.count(i)) {
        r.output.gates.push_back(g);
        continue;
      }
      const auto& kept = marker_survivors[i];
      if (kept.empty()) {
        r.removed.push_back({i, Reason::DeadQubit});
      } else {
        r.rewritten.push_back({i, g, kept, Reason::DeadQubit});
      }
      r.output.gates.insert(r.output.gates.end(), kept.begin(), kept.end());
      continue;
    }
    const bool removed = std::any_of(r.removed.begin(), r.removed.end(), [i](const Removal& x) { return x.index == i; });
    if (!removed) r.output.gates.push_back(g);
  }
  finish(r, c, EquivalenceScope::ArgumentDistribution);
  return r;
}

CompilationPassResult elide_inverse_qft(const Circuit& c, const OrderProfile& profile, bool force) {
  CompilationPassResult r = unchanged("qft-elision", c);
  if (!profile.power_of_two_order() && !force) {
    r.applicable = false;
    r.notes.push_back("order r = " + std::to_string(profile.order) + " is not a power of two");
    return r;
  }
  // The region is the marker, or else the argument-only tail after the last
  // function-register gate.
  std::vector<std::size_t> region;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (c.gates[i].kind == GateKind::InverseQft) region.push_back(i);
  }
  if (region.empty()) {
    for (std::size_t i = function_boundary(c); i < c.gates.size(); ++i) region.push_back(i);
  }
  if (region.empty()) {
    r.notes.push_back("no inverse-QFT gates present");
    return r;
  }
  std::set<std::size_t> drop(region.begin(), region.end());

  if (profile.power_of_two_order()) {
    const int n = static_cast<int>(c.argument_register.size());
    const int k_count = std::max(0, n - *profile.log2_order);
    for (int b = 0; b < k_count; ++b) {
      const int q = c.argument_register[b];
      bool first = true;
      std::vector<std::size_t> local;
      bool idle = true;
      for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        if (drop.count(i) || !g.touches(q)) continue;
        if (first && g.kind == GateKind::H) {
          local.push_back(i);
        } else if (g.kind == GateKind::ControlledU && g.qubits[0] == q && g.multiplier.factor() == 1) {
          local.push_back(i);
        } else {
          idle = false;
        }
        first = false;
      }
      if (!idle) {
        if (!force) {
          r.applicable = false;
          r.notes.push_back("k-qubit " + std::to_string(q) + " not idle");
          return r;
        }
        continue;
      }
      drop.insert(local.begin(), local.end());
    }
  } else {
    r.notes.push_back("forced elision with r = " + std::to_string(profile.order));
  }

  r.output.gates.clear();
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (drop.count(i)) {
      r.removed.push_back({i, Reason::QftElision});
    } else {
      r.output.gates.push_back(c.gates[i]);
    }
  }
  r.output.measure_argument = true;
  r.output.reverse_argument = true;
  finish(r, c, EquivalenceScope::ArgumentDistribution);
  return r;
}

CompilationPassResult specialize_cswap_to_cnot(const Circuit& c) {
  CompilationPassResult r = unchanged("cswap-specialize", c);
  // Forward basis-value knowledge per qubit.
  // Argument qubits may hold any superposition, so they start unknown.
  std::vector<std::optional<bool>> known(static_cast<std::size_t>(c.width));
  const int m = static_cast<int>(c.function_register.size());
  for (int t = 0; t < m; ++t) known[c.function_register[t]] = ((c.function_input >> (m - 1 - t)) & 1U) != 0;

  r.output.gates.clear();
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    auto& q0 = known[g.qubits[0]];
    switch (g.kind) {
      case GateKind::H:
        q0.reset();
        break;
      case GateKind::X:
        if (q0) q0 = !*q0;
        break;
      case GateKind::CNOT: {
        auto& t = known[g.qubits[1]];
        if (!q0) {
          t.reset();
        } else if (*q0 && t) {
          t = !*t;
        }
        break;
      }
      case GateKind::SWAP: std::swap(known[g.qubits[0]], known[g.qubits[1]]); break;
      case GateKind::ControlledU: {
        if (q0 && !*q0) break;
        std::vector<int> f(g.qubits.begin() + 1, g.qubits.end());
        const bool all_known = std::all_of(f.begin(), f.end(), [&](int q) { return known[q].has_value(); });
        if (q0 && all_known) {
          std::uint64_t y = 0;
          for (int q : f) y = (y << 1) | (*known[q] ? 1U : 0U);
          if (y < g.multiplier.modulus) y = mul_mod(g.multiplier.factor(), y, g.multiplier.modulus);
          for (std::size_t b = 0; b < f.size(); ++b) known[f[b]] = ((y >> (f.size() - 1 - b)) & 1U) != 0;
        } else {
          for (int q : f) known[q].reset();
        }
        break;
      }
      case GateKind::CSWAP: {
        auto& a = known[g.qubits[1]];
        auto& b = known[g.qubits[2]];
        if (q0 && !*q0) {
          r.removed.push_back({i, Reason::FixedInputSpecialization});
          continue;
        }
        if (a && b && *a == *b) {
          r.removed.push_back({i, Reason::FixedInputSpecialization});
          continue;
        }
        if (a && b) {
          std::vector<Gate> repl{Gate::cnot(g.qubits[0], g.qubits[1]), Gate::cnot(g.qubits[0], g.qubits[2])};
          r.rewritten.push_back({i, g, repl, Reason::FixedInputSpecialization});
          r.output.gates.insert(r.output.gates.end(), repl.begin(), repl.end());
          if (q0) {
            std::swap(a, b);
          } else {
            a.reset();
            b.reset();
          }
          continue;
        }
        r.notes.push_back("gate " + std::to_string(i) + " (" + to_string(g) +
                          "): specialization-unsound, swap pair not provably fixed");
        if (q0) {
          std::swap(a, b);
        } else {
          a.reset();
          b.reset();
        }
        break;
      }
      case GateKind::InverseQft:
        for (int q : g.qubits) known[q].reset();
        break;
      default: break;  // diagonal phases keep basis values
    }
    r.output.gates.push_back(g);
  }
  finish(r, c, EquivalenceScope::RestrictedInput);
  return r;
}

CompilationPassResult recode_function_register(const Circuit& c, const OrderProfile& profile) {
  CompilationPassResult r = unchanged("log-recode", c);
  if (!profile.power_of_two_order()) {
    r.applicable = false;
    r.notes.push_back("order r = " + std::to_string(profile.order) + " is not a power of two");
    return r;
  }
  const int l = *profile.log2_order;
  const int n = static_cast<int>(c.argument_register.size());
  std::vector<std::size_t> span;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (touches_any(c.gates[i], c.function_register)) span.push_back(i);
  }
  if (span.empty()) {
    r.applicable = false;
    r.notes.push_back("no gates act on the function register");
    return r;
  }
  for (std::size_t i = span.front(); i <= span.back(); ++i) {
    const Gate& g = c.gates[i];
    if (!touches_any(g, c.function_register)) {
      r.applicable = false;
      r.notes.push_back("gate " + std::to_string(i) + " interleaves the function-register block");
      return r;
    }
    if (!g.classical()) {
      r.applicable = false;
      r.notes.push_back("gate " + std::to_string(i) + " on the function register is not classical");
      return r;
    }
  }
  if (c.function_register.size() == static_cast<std::size_t>(l) && c.function_input == 0) {
    // Already log-encoded if the block is the recode network.
    bool same = true;
    std::size_t pos = 0;
    const int bits = std::min(n, l);
    for (int b = bits - 1; b >= 0 && same; --b, ++pos) {
      same = span.size() > pos &&
             c.gates[span[pos]] == Gate::cnot(c.argument_register[n - 1 - b], c.function_register[l - 1 - b]);
    }
    if (same && span.size() == pos) {
      r.notes.push_back("function register already log-encoded");
      return r;
    }
  }
  // The block must compute C^x mod N for every argument value.
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < count; ++x) {
    std::uint64_t idx = argument_input(c, x);
    for (std::size_t i : span) idx = classical_step(c.gates[i], idx, c.width);
    if (read_register(idx, c.argument_register, c.width) != x ||
        read_register(idx, c.function_register, c.width) != pow_mod(profile.base, x, profile.modulus)) {
      r.applicable = false;
      r.notes.push_back("function block does not compute C^x mod N at x = " + std::to_string(x));
      return r;
    }
  }

  // Compact the surviving qubits, then append l log-encoded function qubits.
  std::vector<int> remap(static_cast<std::size_t>(c.width), -1);
  int next = 0;
  for (int q = 0; q < c.width; ++q) {
    if (std::find(c.function_register.begin(), c.function_register.end(), q) == c.function_register.end()) {
      remap[q] = next++;
    }
  }
  Circuit out = c;
  out.width = next + l;
  out.function_register.clear();
  for (int b = 0; b < l; ++b) out.function_register.push_back(next + b);
  out.function_input = 0;
  for (int& q : out.argument_register) q = remap[q];
  std::vector<Gate> recode;
  const int bits = std::min(n, l);
  for (int b = bits - 1; b >= 0; --b) {
    recode.push_back(Gate::cnot(out.argument_register[n - 1 - b], out.function_register[l - 1 - b]));
  }
  out.gates.clear();
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (i == span.front()) {
      r.rewritten.push_back({i, c.gates[i], recode, Reason::LogRecode});
      out.gates.insert(out.gates.end(), recode.begin(), recode.end());
      continue;
    }
    if (std::find(span.begin(), span.end(), i) != span.end()) {
      r.removed.push_back({i, Reason::LogRecode});
      continue;
    }
    Gate g = c.gates[i];
    for (int& q : g.qubits) q = remap[q];
    out.gates.push_back(g);
  }
  r.output = out;
  r.notes.push_back("function register " + std::to_string(c.function_register.size()) + " -> " + std::to_string(l) +
                    " qubits");
  finish(r, c, EquivalenceScope::ArgumentDistribution);
  return r;
}

const std::vector<std::string>& pipeline_pass_names() {
  static const std::vector<std::string> names{"hadamard-pair", "trivial-power",    "dead-qubit",
                                              "qft-elision",   "cswap-specialize", "log-recode"};
  return names;
}

CompilationPassResult run_pass(std::string_view name, const Circuit& c, const OrderProfile& profile) {
  if (name == "hadamard-pair") return cancel_adjacent_inverses(c);
  if (name == "trivial-power") return remove_trivial_controlled_powers(c, profile);
  if (name == "dead-qubit") return eliminate_dead_qubit_gates(c, profile);
  if (name == "qft-elision") return elide_inverse_qft(c, profile);
  if (name == "cswap-specialize") return specialize_cswap_to_cnot(c);
  if (name == "log-recode") return recode_function_register(c, profile);
  throw PreconditionError("unknown pass '" + std::string(name) + "'");
}

PipelineResult run_pipeline(const Circuit& c, const OrderProfile& profile, const std::vector<std::string>& passes) {
  for (const auto& p : passes) {
    const auto& all = pipeline_pass_names();
    if (std::find(all.begin(), all.end(), p) == all.end()) throw PreconditionError("unknown pass '" + p + "'");
  }
  PipelineResult out;
  out.output = c;
  constexpr int kMaxSweeps = 32;
  // After any change, restart from the first pass so earlier rules see the
  // simplified circuit before later ones.
  bool changed = true;
  while (changed && out.sweeps < kMaxSweeps) {
    changed = false;
    ++out.sweeps;
    for (const auto& name : pipeline_pass_names()) {
      if (std::find(passes.begin(), passes.end(), name) == passes.end()) continue;
      auto res = run_pass(name, out.output, profile);
      if (!res.changed()) continue;
      if (res.check && !res.check->equivalent) {
        throw UnsoundPassError("pass " + name + " changed the " + std::string(scope_name(res.check->scope)) +
                               " behaviour (deviation " + std::to_string(res.check->max_deviation) + ")");
      }
      out.output = res.output;
      out.passes.push_back(std::move(res));
      changed = true;
      break;
    }
  }
  if (changed) throw ConvergenceError("compilation pipeline did not reach a fixpoint", out.sweeps);
  return out;
}

}  // namespace shorlab
