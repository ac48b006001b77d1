#include "commands.hpp"

#include "shorlab/circuit_io.hpp"
#include "shorlab/classical.hpp"
#include "shorlab/compiler.hpp"
#include "shorlab/errors.hpp"
#include "shorlab/experiment.hpp"
#include "shorlab/gates.hpp"
#include "shorlab/metrics.hpp"
#include "shorlab/tomography.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace shorlab::cli {

using report::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kParse;
  if (dynamic_cast<const PreconditionError*>(&e)) return kPrecondition;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kNonConvergence;
  if (dynamic_cast<const UnsoundPassError*>(&e)) return kUnsoundPass;
  return kUsage;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_unit(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + text + "'");
  }
}

void apply_overrides(NoiseSpec& spec, std::optional<double> visibility, std::optional<double> depolarizing) {
  if (visibility) {
    spec.model.relative_visibility = *visibility;
    spec.model.gate_visibility.clear();
    spec.layout_preset = false;
  }
  if (depolarizing) spec.model.depolarizing_p = *depolarizing;
  spec.model.validate();
}

NoiseModel resolve_noise(const NoiseSpec& spec, const Circuit& c) {
  NoiseModel m = spec.model;
  if (spec.layout_preset) m.gate_visibility = layout_noise(c).gate_visibility;
  return m;
}

json base_report(const std::string& command) {
  return {{"tool", "shorlab"}, {"version", report::kVersion}, {"command", command}};
}

std::vector<std::string> labels_for(std::size_t count, int bits) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(outcome_label(i, bits));
  return out;
}

std::vector<std::string> passes_for(Level to) {
  std::vector<std::string> passes = pipeline_pass_names();
  if (to == Level::Partial) passes.pop_back();  // log-recode
  if (to == Level::Conceptual || to == Level::Decomposed) passes.clear();
  return passes;
}

OrderProfile profile_from(std::optional<std::uint64_t> n, std::optional<std::uint64_t> c, const Circuit* circuit) {
  if (n && c) return OrderProfile::compute(*c, *n);
  if (circuit != nullptr) {
    for (const Gate& g : circuit->gates) {
      if (g.kind == GateKind::ControlledU) return OrderProfile::compute(g.multiplier.base, g.multiplier.modulus);
    }
  }
  return OrderProfile{};
}

// Argument width that keeps the build inside the state-vector cap.
int fitted_width(std::uint64_t n_mod, std::uint64_t base, std::optional<int> requested, std::vector<std::string>& notes) {
  if (requested) return *requested;
  const int n = default_argument_width(n_mod, base);
  const int room = default_limits().state_qubits - ceil_log2(n_mod);
  if (n > room && room >= 1) {
    notes.push_back("argument width reduced from " + std::to_string(n) + " to " + std::to_string(room) +
                    " to fit the state-vector cap");
    return room;
  }
  return n;
}

json conditional_json(const std::vector<ConditionalRow>& rows, int function_bits) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"argument", r.argument},
                   {"probability", r.probability},
                   {"function_bits", function_bits},
                   {"distribution", r.distribution},
                   {"best", r.best},
                   {"best_probability", r.best_probability}});
  }
  return out;
}

json analysis_json(const CircuitAnalysis& a, int function_bits) {
  json states = {{"argument", {{"qubits", a.argument_qubits}, {"matrix", report::matrix_json(a.argument_state)}}}};
  if (a.joint_state.size() > 0) {
    states["joint"] = {{"qubits", a.joint_qubits}, {"matrix", report::matrix_json(a.joint_state)}};
    states["ideal_joint"] = {{"qubits", a.joint_qubits}, {"matrix", report::matrix_json(a.ideal_joint_state)}};
  }
  json out = {{"states", std::move(states)},
              {"metrics", report::metric_report_json(a.metrics)},
              {"conditional", conditional_json(a.conditional, function_bits)},
              {"ghz_frame", nullptr}};
  if (a.ghz_frame) out["ghz_frame"] = std::string(a.ghz_frame->begin(), a.ghz_frame->end());
  return out;
}

}  // namespace

NoiseSpec parse_noise(const std::string& spec) {
  NoiseSpec out;
  out.name = spec;
  if (spec == "off") return out;
  if (spec == "preset-paper") {
    out.layout_preset = true;
    return out;
  }
  if (spec == "dependent-pair" || spec == "independent-pair") {
    out.model.relative_visibility = spec == "dependent-pair" ? kDependentPairVisibility : kIndependentPairVisibility;
    return out;
  }
  std::ifstream in(spec);
  if (!in) throw ParseError(0, "noise spec '" + spec + "' is neither a preset nor a readable file");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "relative_visibility") {
      out.model.relative_visibility = parse_unit(value, number);
    } else if (key == "depolarizing_p") {
      out.model.depolarizing_p = parse_unit(value, number);
    } else if (key == "gate_success") {
      out.model.gate_success = parse_unit(value, number);
    } else if (key == "gate_visibility") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) out.model.gate_visibility.push_back(parse_unit(trim(item), number));
    } else if (key == "preset") {
      if (value != "paper" && value != "off") throw ParseError(number, "unknown preset '" + value + "'");
      out.layout_preset = value == "paper";
    } else {
      throw ParseError(number, "unknown noise key '" + key + "'");
    }
  }
  try {
    out.model.validate();
  } catch (const PreconditionError& e) {
    throw ParseError(0, e.what());
  }
  return out;
}

std::optional<Circuit> named_circuit(const std::string& name) {
  if (name == "fig1d") return build_order_finding_circuit(15, 4, 2, Level::Partial);
  if (name == "fig1e") return build_order_finding_circuit(15, 2, 3, Level::Partial);
  if (name == "fig1f") return build_order_finding_circuit(15, 4, 2, Level::Full);
  if (name == "fig1g") return build_order_finding_circuit(15, 2, 3, Level::Full);
  return std::nullopt;
}

CommandResult cmd_compile(const CompileOptions& o) {
  json config = {{"from", level_name(o.from)}, {"to", nullptr}, {"passes", o.passes}, {"circuit_path", nullptr}};
  std::vector<std::string> notes;
  Circuit input;
  OrderProfile profile;
  if (o.circuit_path) {
    input = load_circuit(*o.circuit_path);
    config["circuit_path"] = *o.circuit_path;
    profile = profile_from(o.modulus, o.base, &input);
  } else {
    if (!o.modulus || !o.base) throw PreconditionError("compile needs --circuit or both --N and --C");
    profile = OrderProfile::compute(*o.base, *o.modulus);
    const int n = fitted_width(*o.modulus, *o.base, o.argument_width, notes);
    input = build_order_finding_circuit(*o.modulus, *o.base, n, o.from);
    config["N"] = *o.modulus;
    config["C"] = *o.base;
    config["n"] = n;
  }
  if (o.to) config["to"] = level_name(*o.to);

  json audit;
  Circuit output = input;
  if (!o.passes.empty()) {
    // Explicit pass list: each pass once, in the order given.
    json passes = json::array();
    for (const auto& name : o.passes) {
      const auto r = run_pass(name, output, profile);
      if (r.check && !r.check->equivalent) {
        throw UnsoundPassError("pass " + name + " failed its " + std::string(scope_name(r.check->scope)) + " check");
      }
      passes.push_back(report::pass_json(r, output));
      output = r.output;
    }
    audit = {{"mode", "explicit"}, {"passes", std::move(passes)}};
  } else {
    const Level to = o.to.value_or(Level::Full);
    const auto pipeline = run_pipeline(input, profile, passes_for(to));
    output = pipeline.output;
    audit = report::pipeline_json(pipeline, input);
    audit["mode"] = "pipeline";
  }

  json equivalence = nullptr;
  try {
    const auto eq = equivalence_check(input, output, EquivalenceScope::ArgumentDistribution);
    equivalence = {{"scope", scope_name(eq.scope)}, {"equivalent", eq.equivalent}, {"max_deviation", eq.max_deviation}};
  } catch (const PreconditionError& e) {
    notes.push_back(std::string("final equivalence check skipped: ") + e.what());
  }

  CommandResult res;
  res.report = base_report("compile");
  res.report["config"] = config;
  res.report["order"] = profile.order;
  res.report["input"] = report::circuit_json(input);
  res.report["output"] = report::circuit_json(output);
  res.report["audit"] = audit;
  res.report["equivalence"] = equivalence;
  res.report["notes"] = notes;
  res.files.push_back({"compiled.circ", serialize_circuit(output)});
  return res;
}

CommandResult cmd_run(const RunOptions& o) {
  const auto profile = OrderProfile::compute(o.base, o.modulus);
  std::vector<std::string> notes;
  const Level level = o.level.value_or(profile.power_of_two_order() ? Level::Full : Level::Conceptual);
  const int n = fitted_width(o.modulus, o.base, o.argument_width, notes);
  const Circuit c = build_order_finding_circuit(o.modulus, o.base, n, level);
  NoiseSpec spec = parse_noise(o.noise);
  apply_overrides(spec, o.visibility, o.depolarizing);
  const NoiseModel noise = resolve_noise(spec, c);

  const auto analysis = analyze_circuit(c, noise);

  PipelineConfig pc;
  pc.modulus = o.modulus;
  pc.base = o.base;
  pc.level = level;
  pc.argument_width = n;
  pc.noise = noise;
  pc.shots = o.shots;
  pc.seed = o.seed;
  const auto stats = run_full_pipeline(pc);

  json compilation = nullptr;
  if (o.modulus == 15 && (level == Level::Partial || level == Level::Full)) {
    const Circuit source = build_order_finding_circuit(o.modulus, o.base, n, Level::Decomposed);
    const auto pipeline = run_pipeline(source, profile, passes_for(level));
    compilation = report::pipeline_json(pipeline, source);
    compilation["source_level"] = "decomposed";
    compilation["matches_builder"] = pipeline.output == c;
  }

  std::vector<std::uint64_t> counts;
  for (const auto& l : stats.labels) counts.push_back(l.count);
  const auto labels = labels_for(analysis.argument_distribution.size(), n);

  CommandResult res;
  res.report = base_report("run");
  res.report["config"] = {{"N", o.modulus},       {"C", o.base},     {"level", level_name(level)}, {"n", n},
                          {"noise", spec.name},   {"noise_model", report::noise_json(noise)},
                          {"seed", o.seed},       {"shots", o.shots}};
  res.report["order"] = profile.order;
  res.report["circuit"] = report::circuit_json(c);
  res.report["compilation"] = compilation;
  json dist = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    dist.push_back({{"label", labels[i]}, {"probability", analysis.argument_distribution[i]}, {"count", counts[i]}});
  }
  res.report["argument_distribution"] = std::move(dist);
  res.report["analysis"] = analysis_json(analysis, static_cast<int>(analysis.function_qubits.size()));
  res.report["pipeline"] = report::statistics_json(stats);
  res.report["postselection_yield"] = postselection_yield(c, noise);
  res.report["notes"] = notes;

  res.files.push_back({"distribution.csv", report::distribution_csv(labels, analysis.argument_distribution, counts)});
  res.files.push_back({"conditional.csv", report::conditional_csv(res.report["analysis"]["conditional"])});
  if (o.plot) {
    res.files.push_back({"distribution.svg",
                         report::bar_chart_svg(labels, analysis.argument_distribution,
                                               "N=" + std::to_string(o.modulus) + " C=" + std::to_string(o.base))});
  }
  return res;
}

namespace {

CommandResult state_tomography(const TomographyOptions& o) {
  auto named = named_circuit(o.circuit);
  const Circuit c = named ? *named : load_circuit(o.circuit);
  NoiseSpec spec = parse_noise(o.noise);
  apply_overrides(spec, o.visibility, o.depolarizing);
  const NoiseModel noise = resolve_noise(spec, c);

  std::vector<int> qubits = o.qubits;
  if (qubits.empty()) {
    qubits = active_qubits(c, c.argument_register);
    const auto f = active_qubits(c, c.function_register);
    qubits.insert(qubits.end(), f.begin(), f.end());
  }
  if (qubits.empty() || qubits.size() > 4) throw PreconditionError("state tomography covers 1 to 4 qubits");
  const DensityMatrix rho = partial_trace(run_density(c, noise), qubits);
  const DensityMatrix ideal = reduced_density(run_pure(c), qubits);

  const std::uint64_t shots = o.exact ? 0 : o.shots;
  const auto records = simulate_state_tomography(rho, shots, o.seed);
  const auto fit = reconstruct_state(records);

  MetricReport m;
  m.fidelity = MetricValue{fidelity(fit.rho, ideal), std::nullopt};
  m.linear_entropy = MetricValue{linear_entropy(fit.rho), std::nullopt};
  const int k = static_cast<int>(qubits.size());
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      m.tangles.push_back({qubits[i], qubits[j], MetricValue{tangle(partial_trace(fit.rho, {i, j})), std::nullopt}});
    }
  }
  std::optional<LocalFrame> frame;
  if (k == 3) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(hermitian_part(ideal));
    frame = ghz_local_frame(StateVector(es.eigenvectors().col(7)));
    m.ghz_witness = MetricValue{ghz_witness(fit.rho, *frame), std::nullopt};
  }
  if (o.bootstrap > 0) {
    const auto b = bootstrap_state_metric(fit.rho, records, [&](const DensityMatrix& r) { return fidelity(r, ideal); },
                                          o.bootstrap, o.seed + 1);
    m.fidelity->error = b.stddev;
    if (frame) {
      const auto w = bootstrap_state_metric(fit.rho, records,
                                            [&](const DensityMatrix& r) { return ghz_witness(r, *frame); }, o.bootstrap,
                                            o.seed + 2);
      m.ghz_witness->error = w.stddev;
    }
  }

  CommandResult res;
  res.report = base_report("tomography");
  res.report["config"] = {{"target", "state"},   {"circuit", o.circuit}, {"qubits", qubits},
                          {"noise", spec.name},  {"noise_model", report::noise_json(noise)},
                          {"shots", shots},      {"exact", o.exact},     {"seed", o.seed},
                          {"bootstrap", o.bootstrap}};
  res.report["settings"] = records.size();
  res.report["iterations"] = fit.iterations;
  res.report["log_likelihood"] = fit.log_likelihood;
  res.report["reconstruction"] = report::matrix_json(fit.rho);
  res.report["ideal"] = report::matrix_json(ideal);
  res.report["metrics"] = report::metric_report_json(m);
  res.report["ghz_frame"] = frame ? json(std::string(frame->begin(), frame->end())) : json(nullptr);
  res.report["records"] = report::records_json(records);
  res.files.push_back({"records.csv", "input,setting,outcome,count\n" + report::records_csv(records)});
  return res;
}

Gate named_gate(const std::string& name) {
  if (name == "cnot") return Gate::cnot(0, 1);
  if (name == "cz") return Gate::cz(0, 1);
  throw PreconditionError("unknown gate '" + name + "' (expected cnot, cz or identity)");
}

ComplexMatrix<double> gate_unitary(const std::string& name) {
  if (name == "identity") return ComplexMatrix<double>::Identity(4, 4);
  return gate_matrix<double>(named_gate(name));
}

CommandResult process_tomography(const TomographyOptions& o) {
  NoiseSpec spec = parse_noise(o.noise);
  apply_overrides(spec, o.visibility, o.depolarizing);
  const NoiseModel noise = spec.layout_preset ? NoiseModel::uniform(kDependentPairVisibility) : spec.model;
  const double v = noise.visibility(0);
  Channel channel;
  if (o.gate == "identity") {
    const double p = noise.depolarizing_p;
    channel = [p](const DensityMatrix& rho) {
      DensityMatrix x = rho;
      if (p > 0.0) {
        x = (1.0 - p) * x + p * DensityMatrix::Identity(4, 4) / 4.0;
      }
      return x;
    };
  } else {
    const Gate g = named_gate(o.gate);
    const double p = noise.depolarizing_p;
    channel = [g, v, p](const DensityMatrix& rho) {
      DensityMatrix x = rho;
      apply_noisy_gate(x, g, 2, v, p);
      return x;
    };
  }
  const std::string reference = o.reference.empty() ? o.gate : o.reference;
  const auto chi_ideal = chi_of_unitary(gate_unitary(reference));
  const std::uint64_t shots = o.exact ? 0 : o.shots;
  const auto data = simulate_process_data(channel, 2, shots, o.seed);
  const auto fit = reconstruct_process(data);
  const double fp = process_fidelity(chi_ideal, fit.chi);
  const double analytic = process_fidelity(chi_ideal, chi_of_channel(channel, 2));

  json fp_json = {{"value", fp}, {"error", nullptr}};
  if (o.bootstrap > 0) {
    const auto b = bootstrap_process_metric(fit.choi, data,
                                            [&](const ComplexMatrix<double>& chi) { return process_fidelity(chi_ideal, chi); },
                                            o.bootstrap, o.seed + 1);
    fp_json["error"] = b.stddev;
  }

  CommandResult res;
  res.report = base_report("tomography");
  res.report["config"] = {{"target", "process"}, {"gate", o.gate},   {"reference", reference},
                          {"noise", spec.name},   {"visibility", v}, {"depolarizing_p", noise.depolarizing_p},
                          {"shots", shots},       {"exact", o.exact}, {"seed", o.seed},
                          {"bootstrap", o.bootstrap}};
  res.report["inputs"] = data.size();
  res.report["iterations"] = fit.iterations;
  res.report["log_likelihood"] = fit.log_likelihood;
  res.report["chi"] = report::matrix_json(fit.chi);
  res.report["chi_ideal"] = report::matrix_json(chi_ideal);
  res.report["process_fidelity"] = fp_json;
  res.report["analytic_process_fidelity"] = analytic;
  std::string csv = "input,setting,outcome,count\n";
  for (const auto& rec : data) csv += report::records_csv(rec.settings, rec.input);
  res.files.push_back({"records.csv", csv});
  return res;
}

}  // namespace

CommandResult cmd_tomography(const TomographyOptions& o) {
  if (o.bootstrap != 0 && o.exact) throw PreconditionError("bootstrap needs finite shots");
  if (o.target == "state") return state_tomography(o);
  if (o.target == "process") return process_tomography(o);
  throw PreconditionError("tomography target must be 'state' or 'process'");
}

}  // namespace shorlab::cli
