#include "commands.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace shorlab;
using namespace shorlab::cli;

Level level_or_throw(const std::string& name) {
  const auto l = parse_level(name);
  if (!l) throw PreconditionError("unknown level '" + name + "' (conceptual, decomposed, partial, full)");
  return *l;
}

void write_outputs(const std::string& command, const CommandResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& contents) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw PreconditionError("cannot write " + (fs::path(dir) / name).string());
    out << contents;
  };
  write(command + ".json", r.report.dump(2) + "\n");
  for (const auto& f : r.files) write(f.name, f.contents);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compiled order-finding circuits: build, simulate, reconstruct"};
  app.require_subcommand(1);
  std::string out_dir;
  app.add_option("--out", out_dir, "Directory for the JSON report and CSV/SVG artifacts");

  CompileOptions co;
  std::string co_circuit, co_from = "conceptual", co_to;
  auto* compile = app.add_subcommand("compile", "Run compilation passes and print the audit");
  compile->add_option("--circuit", co_circuit, "Input circuit file");
  compile->add_option("--N", co.modulus, "Modulus");
  compile->add_option("--C", co.base, "Base co-prime to N");
  compile->add_option("--n", co.argument_width, "Argument-register width");
  compile->add_option("--from", co_from, "Builder level of the input circuit");
  compile->add_option("--to", co_to, "Target level: partial or full");
  compile->add_option("--pass", co.passes, "Run these passes once each, in order")->delimiter(',');

  RunOptions ro;
  std::string ro_level;
  auto* run = app.add_subcommand("run", "Simulate a circuit and post-process the readout");
  run->add_option("--N", ro.modulus, "Modulus");
  run->add_option("--C", ro.base, "Base co-prime to N");
  run->add_option("--n", ro.argument_width, "Argument-register width");
  run->add_option("--level", ro_level, "conceptual, decomposed, partial or full");
  run->add_option("--noise", ro.noise, "off, preset-paper, dependent-pair, independent-pair or a key=value file");
  run->add_option("--vr", ro.visibility, "Relative visibility for every interferometric gate");
  run->add_option("--depol", ro.depolarizing, "Two-qubit depolarizing probability per gate");
  run->add_option("--shots", ro.shots, "Sampled shots");
  run->add_option("--seed", ro.seed, "RNG seed");
  run->add_flag("--plot", ro.plot, "Also write distribution.svg");

  TomographyOptions to;
  auto* tomo = app.add_subcommand("tomography", "Simulated state or process tomography");
  tomo->add_option("target", to.target, "state or process")->check(CLI::IsMember({"state", "process"}));
  tomo->add_option("--circuit", to.circuit, "fig1d, fig1e, fig1f, fig1g or a circuit file");
  tomo->add_option("--qubits", to.qubits, "Qubits to reconstruct")->delimiter(',');
  tomo->add_option("--gate", to.gate, "cnot, cz or identity");
  tomo->add_option("--reference", to.reference, "Ideal gate for the process fidelity");
  tomo->add_option("--noise", to.noise, "off, preset-paper, dependent-pair, independent-pair or a key=value file");
  tomo->add_option("--vr", to.visibility, "Relative visibility");
  tomo->add_option("--depol", to.depolarizing, "Depolarizing probability per gate");
  tomo->add_option("--shots", to.shots, "Shots per setting");
  tomo->add_flag("--exact", to.exact, "Use exact probabilities instead of sampled counts");
  tomo->add_option("--seed", to.seed, "RNG seed");
  tomo->add_option("--bootstrap", to.bootstrap, "Parametric bootstrap resamples (>= 100)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    std::string command;
    CommandResult result;
    if (*compile) {
      command = "compile";
      if (!co_circuit.empty()) co.circuit_path = co_circuit;
      co.from = level_or_throw(co_from);
      if (!co_to.empty()) co.to = level_or_throw(co_to);
      result = cmd_compile(co);
    } else if (*run) {
      command = "run";
      if (!ro_level.empty()) ro.level = level_or_throw(ro_level);
      result = cmd_run(ro);
    } else {
      command = "tomography";
      result = cmd_tomography(to);
    }
    if (out_dir.empty()) {
      if (const char* env = std::getenv("SHORLAB_OUT_DIR")) out_dir = env;
    }
    if (!out_dir.empty()) write_outputs(command, result, out_dir);
    std::cout << result.report.dump(2) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "shorlab: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
