#pragma once

#include "shorlab/classical.hpp"
#include "shorlab/compiler.hpp"
#include "shorlab/metrics.hpp"
#include "shorlab/sim.hpp"
#include "shorlab/tomography.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace shorlab::report {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// {"dimension": d, "rows": [[[re, im], ...], ...]} in row-major order.
json matrix_json(const ComplexMatrix<double>& m);
json circuit_json(const Circuit& c);
json noise_json(const NoiseModel& noise);
json pass_json(const CompilationPassResult& r, const Circuit& input);
json pipeline_json(const PipelineResult& p, const Circuit& input);
json metric_json(const MetricValue& v);
json metric_report_json(const MetricReport& m);
json statistics_json(const PipelineStatistics& s);
json records_json(const std::vector<MeasurementRecord>& records);

/// label,probability,count
std::string distribution_csv(const std::vector<std::string>& labels, const std::vector<double>& probabilities,
                             const std::vector<std::uint64_t>& counts);
/// input,setting,outcome,count (input column empty for state tomography);
/// exact records report probabilities in the count column.
std::string records_csv(const std::vector<MeasurementRecord>& records, const std::string& input = "");
/// argument,function,probability
std::string conditional_csv(const json& conditional);

/// Static SVG bar chart of a labelled distribution.
std::string bar_chart_svg(const std::vector<std::string>& labels, const std::vector<double>& values,
                          const std::string& title);

}  // namespace shorlab::report
