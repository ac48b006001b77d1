#pragma once

#include "report.hpp"

#include "shorlab/builder.hpp"
#include "shorlab/sim.hpp"

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace shorlab::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kPrecondition = 3,
  kNonConvergence = 4,
  kUnsoundPass = 5,
};

/// Maps a thrown library error to the process exit code.
int exit_code_for(const std::exception& e);

/// Files written next to the JSON report, name -> contents.
struct Artifact {
  std::string name;
  std::string contents;
};

struct CommandResult {
  report::json report;
  std::vector<Artifact> files;
};

/// `off`, `preset-paper`, `dependent-pair` (V = 0.98 everywhere),
/// `independent-pair` (V = 0.85), or a path to a key=value file with keys
/// relative_visibility, gate_visibility (comma list), depolarizing_p,
/// gate_success and preset (= paper). Throws ParseError on bad lines.
struct NoiseSpec {
  NoiseModel model;
  bool layout_preset = false;
  std::string name = "off";
};
NoiseSpec parse_noise(const std::string& spec);

struct CompileOptions {
  std::optional<std::string> circuit_path;
  std::optional<std::uint64_t> modulus;
  std::optional<std::uint64_t> base;
  std::optional<int> argument_width;
  Level from = Level::Conceptual;
  std::optional<Level> to;
  std::vector<std::string> passes;
};
CommandResult cmd_compile(const CompileOptions& o);

struct RunOptions {
  std::uint64_t modulus = 15;
  std::uint64_t base = 4;
  std::optional<Level> level;
  std::optional<int> argument_width;
  std::string noise = "off";
  std::optional<double> visibility;
  std::optional<double> depolarizing;
  std::uint64_t shots = 10000;
  std::uint64_t seed = 1;
  bool plot = false;
};
CommandResult cmd_run(const RunOptions& o);

struct TomographyOptions {
  std::string target = "state";  // state | process
  std::string circuit = "fig1g";  // fig1d..fig1g or a circuit file (state)
  std::vector<int> qubits;        // state: measured qubits, default active ones
  std::string gate = "cnot";      // process: cnot | cz | identity
  std::string reference;          // process: ideal gate, default `gate`
  std::string noise = "off";
  std::optional<double> visibility;
  std::optional<double> depolarizing;
  std::uint64_t shots = 10000;
  bool exact = false;
  std::uint64_t seed = 1;
  int bootstrap = 0;
};
CommandResult cmd_tomography(const TomographyOptions& o);

/// Named circuits: fig1d/fig1e partial and fig1f/fig1g full, for C = 4 and C = 2.
std::optional<Circuit> named_circuit(const std::string& name);

}  // namespace shorlab::cli
