#include "report.hpp"

#include "shorlab/circuit_io.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace shorlab::report {

json matrix_json(const ComplexMatrix<double>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dimension", m.rows()}, {"rows", std::move(rows)}};
}

json circuit_json(const Circuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates) gates.push_back(to_string(g));
  return {{"width", c.width},
          {"argument_register", c.argument_register},
          {"function_register", c.function_register},
          {"function_input", c.function_input},
          {"gates", std::move(gates)},
          {"measure_argument", c.measure_argument},
          {"reverse_argument", c.reverse_argument},
          {"text", serialize_circuit(c)}};
}

json noise_json(const NoiseModel& noise) {
  return {{"relative_visibility", noise.relative_visibility},
          {"gate_visibility", noise.gate_visibility},
          {"depolarizing_p", noise.depolarizing_p},
          {"gate_success", noise.gate_success}};
}

json pass_json(const CompilationPassResult& r, const Circuit& input) {
  json removed = json::array();
  for (const auto& x : r.removed) {
    removed.push_back({{"index", x.index}, {"gate", to_string(input.gates[x.index])}, {"reason", reason_name(x.reason)}});
  }
  json rewritten = json::array();
  for (const auto& x : r.rewritten) {
    json next = json::array();
    for (const Gate& g : x.new_gates) next.push_back(to_string(g));
    rewritten.push_back(
        {{"index", x.index}, {"old", to_string(x.old_gate)}, {"new", std::move(next)}, {"reason", reason_name(x.reason)}});
  }
  json out = {{"pass", r.pass_name},
              {"applicable", r.applicable},
              {"removed", std::move(removed)},
              {"rewritten", std::move(rewritten)},
              {"notes", r.notes},
              {"check", nullptr}};
  if (r.check) {
    out["check"] = {{"scope", scope_name(r.check->scope)},
                    {"equivalent", r.check->equivalent},
                    {"max_deviation", r.check->max_deviation}};
  }
  return out;
}

json pipeline_json(const PipelineResult& p, const Circuit& input) {
  json passes = json::array();
  Circuit current = input;
  for (const auto& r : p.passes) {
    passes.push_back(pass_json(r, current));
    current = r.output;
  }
  return {{"sweeps", p.sweeps}, {"passes", std::move(passes)}};
}

json metric_json(const MetricValue& v) {
  json out = {{"value", v.value}, {"error", nullptr}};
  if (v.error) out["error"] = *v.error;
  return out;
}

json metric_report_json(const MetricReport& m) {
  json out = json::object();
  out["fidelity"] = m.fidelity ? metric_json(*m.fidelity) : json(nullptr);
  out["linear_entropy"] = m.linear_entropy ? metric_json(*m.linear_entropy) : json(nullptr);
  out["ghz_witness"] = m.ghz_witness ? metric_json(*m.ghz_witness) : json(nullptr);
  json t = json::array();
  for (const auto& p : m.tangles) t.push_back({{"qubits", {p.a, p.b}}, {"tangle", metric_json(p.tangle)}});
  out["tangles"] = std::move(t);
  return out;
}

json statistics_json(const PipelineStatistics& s) {
  json labels = json::array();
  for (const auto& l : s.labels) {
    json f = nullptr;
    if (l.outcome.factors) f = {l.outcome.factors->first, l.outcome.factors->second};
    labels.push_back({{"label", l.bits},
                      {"probability", l.probability},
                      {"count", l.count},
                      {"candidate_order", l.outcome.candidate_order},
                      {"classification", outcome_name(l.outcome.classification)},
                      {"factors", f}});
  }
  auto entry = [&s](std::uint64_t k) {
    return json{{"count", k}, {"fraction", s.fraction(k)}, {"binomial_error", s.binomial_error(k)}};
  };
  return {{"shots", s.shots},
          {"labels", std::move(labels)},
          {"success", entry(s.successes)},
          {"expected_failure", entry(s.expected_failures)},
          {"trivial_factors", entry(s.trivial)},
          {"exact_success_probability", s.exact_success()}};
}

json records_json(const std::vector<MeasurementRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    json e = {{"setting", r.basis}, {"shots", r.shots}};
    if (r.is_exact()) {
      e["probabilities"] = r.exact;
    } else {
      e["counts"] = r.counts;
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string distribution_csv(const std::vector<std::string>& labels, const std::vector<double>& probabilities,
                             const std::vector<std::uint64_t>& counts) {
  std::ostringstream os;
  os << "label,probability,count\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << labels[i] << ',' << number(probabilities[i]) << ',' << (i < counts.size() ? counts[i] : 0) << '\n';
  }
  return os.str();
}

std::string records_csv(const std::vector<MeasurementRecord>& records, const std::string& input) {
  std::ostringstream os;
  for (const auto& r : records) {
    const int k = static_cast<int>(r.basis.size());
    const std::size_t outcomes = r.is_exact() ? r.exact.size() : r.counts.size();
    for (std::size_t o = 0; o < outcomes; ++o) {
      os << input << ',' << r.basis << ',' << outcome_label(o, k) << ','
         << (r.is_exact() ? number(r.exact[o]) : std::to_string(r.counts[o])) << '\n';
    }
  }
  return os.str();
}

std::string conditional_csv(const json& conditional) {
  std::ostringstream os;
  os << "argument,function,probability\n";
  for (const auto& row : conditional) {
    const auto& dist = row.at("distribution");
    const int bits = static_cast<int>(row.at("function_bits").get<int>());
    for (std::size_t y = 0; y < dist.size(); ++y) {
      os << row.at("argument").get<std::string>() << ',' << outcome_label(y, bits) << ','
         << number(dist[y].get<double>()) << '\n';
    }
  }
  return os.str();
}

std::string bar_chart_svg(const std::vector<std::string>& labels, const std::vector<double>& values,
                          const std::string& title) {
  const int bar = 40, gap = 16, height = 200, margin = 40;
  const int width = margin * 2 + static_cast<int>(labels.size()) * (bar + gap);
  const double top = std::max(1e-12, *std::max_element(values.begin(), values.end()));
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height + 2 * margin
     << "\">\n";
  os << "  <text x=\"" << margin << "\" y=\"" << margin / 2 << "\" font-family=\"sans-serif\" font-size=\"14\">"
     << title << "</text>\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int x = margin + static_cast<int>(i) * (bar + gap);
    const int h = static_cast<int>(values[i] / top * height + 0.5);
    os << "  <rect x=\"" << x << "\" y=\"" << margin + height - h << "\" width=\"" << bar << "\" height=\"" << h
       << "\" fill=\"#4c72b0\"/>\n";
    os << "  <text x=\"" << x + bar / 2 << "\" y=\"" << margin + height + 16
       << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" << labels[i] << "</text>\n";
    os << "  <text x=\"" << x + bar / 2 << "\" y=\"" << margin + height - h - 4
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << std::fixed
       << std::setprecision(3) << values[i] << std::defaultfloat << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace shorlab::report
