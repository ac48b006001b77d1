#include "shorlab/circuit_io.hpp"

#include "shorlab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace shorlab {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Splits on whitespace, keeping bracketed lists together.
std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : line) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (std::isspace(static_cast<unsigned char>(ch)) && depth <= 0) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::int64_t parse_int(const std::string& s, int line, const char* what) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line, std::string("expected integer for ") + what + ", got '" + s + "'");
  }
  return v;
}

std::vector<int> parse_list(const std::string& s, int line, const char* what) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw ParseError(line, std::string("expected [..] list for ") + what);
  }
  std::vector<int> out;
  std::string body = s.substr(1, s.size() - 2);
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_int(item, line, what)));
  return out;
}

std::map<std::string, std::string> parse_keys(const std::vector<std::string>& toks, std::size_t from,
                                              int line) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = from; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(line, "expected key=value, got '" + toks[i] + "'");
    const std::string key = lower(toks[i].substr(0, eq));
    if (!kv.emplace(key, toks[i].substr(eq + 1)).second) throw ParseError(line, "duplicate key '" + key + "'");
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key, int line) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(line, "missing key '" + key + "'");
  return it->second;
}

void check_qubits(const std::vector<int>& qs, int width, int line) {
  std::set<int> distinct;
  for (int q : qs) {
    if (q < 0 || q >= width) throw ParseError(line, "qubit index " + std::to_string(q) + " out of range");
    if (!distinct.insert(q).second) {
      throw ParseError(line, qs.size() == 2 ? "identical control/target" : "repeated qubit " + std::to_string(q));
    }
  }
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_header = false;
  bool have_measure = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string head = lower(toks[0]);

    if (head == "circuit") {
      if (have_header) throw ParseError(line_no, "duplicate circuit header");
      auto kv = parse_keys(toks, 1, line_no);
      for (const auto& [k, v] : kv) {
        if (k != "width" && k != "arg" && k != "func" && k != "finit") {
          throw ParseError(line_no, "unknown header key '" + k + "'");
        }
      }
      c.width = static_cast<int>(parse_int(require(kv, "width", line_no), line_no, "width"));
      if (c.width < 1 || c.width > 62) throw ParseError(line_no, "width out of range");
      c.argument_register = parse_list(require(kv, "arg", line_no), line_no, "arg");
      c.function_register = parse_list(require(kv, "func", line_no), line_no, "func");
      if (auto it = kv.find("finit"); it != kv.end()) {
        const auto v = parse_int(it->second, line_no, "finit");
        if (v < 0) throw ParseError(line_no, "finit must be non-negative");
        c.function_input = static_cast<std::uint64_t>(v);
      }
      if (c.argument_register.empty() || c.function_register.empty()) {
        throw ParseError(line_no, "argument and function registers must be nonempty");
      }
      std::set<int> seen;
      for (const auto* reg : {&c.argument_register, &c.function_register}) {
        for (int q : *reg) {
          if (q < 0 || q >= c.width) throw ParseError(line_no, "register qubit " + std::to_string(q) + " out of range");
          if (!seen.insert(q).second) throw ParseError(line_no, "register overlap at qubit " + std::to_string(q));
        }
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "expected 'circuit' header before gates");
    if (have_measure) throw ParseError(line_no, "nothing may follow the measure line");

    if (head == "measure") {
      if (toks.size() < 2 || lower(toks[1]) != "arg") throw ParseError(line_no, "expected 'measure arg'");
      if (toks.size() > 3 || (toks.size() == 3 && lower(toks[2]) != "reversed")) {
        throw ParseError(line_no, "unexpected tokens after 'measure arg'");
      }
      c.measure_argument = true;
      c.reverse_argument = toks.size() == 3;
      have_measure = true;
      continue;
    }

    auto operands = [&](std::size_t count) {
      if (toks.size() != count + 1) {
        throw ParseError(line_no, "'" + head + "' takes " + std::to_string(count) + " operands");
      }
      std::vector<int> qs;
      for (std::size_t i = 1; i <= count; ++i) qs.push_back(static_cast<int>(parse_int(toks[i], line_no, "qubit")));
      return qs;
    };

    Gate g;
    if (head == "h" || head == "x" || head == "t") {
      g.kind = head == "h" ? GateKind::H : head == "x" ? GateKind::X : GateKind::T;
      g.qubits = operands(1);
    } else if (head == "cnot" || head == "cz" || head == "swap") {
      g.kind = head == "cnot" ? GateKind::CNOT : head == "cz" ? GateKind::CZ : GateKind::SWAP;
      g.qubits = operands(2);
    } else if (head == "cswap") {
      g.kind = GateKind::CSWAP;
      g.qubits = operands(3);
    } else if (head == "cr") {
      auto qs = operands(3);
      g.kind = GateKind::CR;
      g.rotation = qs[2];
      if (g.rotation < 1) throw ParseError(line_no, "cr rotation k must be >= 1");
      g.qubits = {qs[0], qs[1]};
    } else if (head == "iqft") {
      if (toks.size() != 2) throw ParseError(line_no, "'iqft' takes one qubit list");
      g.kind = GateKind::InverseQft;
      g.qubits = parse_list(toks[1], line_no, "iqft");
      if (g.qubits.empty()) throw ParseError(line_no, "iqft list is empty");
    } else if (head == "cu") {
      auto kv = parse_keys(toks, 1, line_no);
      for (const auto& [k, v] : kv) {
        if (k != "c" && k != "n" && k != "j" && k != "ctrl" && k != "func") {
          throw ParseError(line_no, "unknown cu key '" + k + "'");
        }
      }
      const auto base = parse_int(require(kv, "c", line_no), line_no, "c");
      const auto mod = parse_int(require(kv, "n", line_no), line_no, "n");
      const auto j = parse_int(require(kv, "j", line_no), line_no, "j");
      if (base < 1 || mod < 2 || j < 0 || j > 62) throw ParseError(line_no, "cu parameters out of range");
      ModularMultiplier mul{static_cast<std::uint64_t>(base), static_cast<std::uint64_t>(mod), static_cast<int>(j)};
      const int ctrl = static_cast<int>(parse_int(require(kv, "ctrl", line_no), line_no, "ctrl"));
      g = Gate::controlled_u(ctrl, parse_list(require(kv, "func", line_no), line_no, "func"), mul);
    } else {
      throw ParseError(line_no, "unknown gate '" + toks[0] + "'");
    }
    check_qubits(g.qubits, c.width, line_no);
    c.gates.push_back(std::move(g));
    try {
      Circuit probe;
      probe.width = c.width;
      probe.argument_register = c.argument_register;
      probe.function_register = c.function_register;
      probe.function_input = 0;
      probe.gates = {c.gates.back()};
      probe.validate();
    } catch (const PreconditionError& e) {
      std::string msg = e.what();
      if (auto colon = msg.find("): "); colon != std::string::npos) msg = msg.substr(colon + 3);
      throw ParseError(line_no, msg);
    }
  }
  if (!have_header) throw ParseError(0, "missing 'circuit' header");
  try {
    c.validate();
  } catch (const PreconditionError& e) {
    throw ParseError(0, e.what());
  }
  return c;
}

std::string serialize_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "circuit width=" << c.width << " arg=" << join(c.argument_register)
     << " func=" << join(c.function_register);
  if (c.function_input != 1) os << " finit=" << c.function_input;
  os << '\n';
  for (const Gate& g : c.gates) os << to_string(g) << '\n';
  if (c.measure_argument) os << "measure arg" << (c.reverse_argument ? " reversed" : "") << '\n';
  return os.str();
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open circuit file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_circuit(ss.str());
}

}  // namespace shorlab
