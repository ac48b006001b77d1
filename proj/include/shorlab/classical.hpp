#pragma once

#include "shorlab/builder.hpp"
#include "shorlab/number_theory.hpp"
#include "shorlab/sim.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shorlab {

enum class Outcome { Success, ExpectedFailure, TrivialFactors };

std::string_view outcome_name(Outcome o);

using FactorPair = std::pair<std::uint64_t, std::uint64_t>;

/// gcd(C^(r/2) -+ 1, N); empty when r is odd or both gcds are trivial.
std::optional<FactorPair> factors_from_order(std::uint64_t c, std::uint64_t r, std::uint64_t n);

struct FactoringOutcome {
  std::string bits;
  std::uint64_t candidate_order = 0;  // 0 when no phase information (x = 0)
  Outcome classification = Outcome::ExpectedFailure;
  std::optional<FactorPair> factors;
};

/// Reads `bits` (first character most significant) as x, expands x / 2^n in
/// continued fractions and takes the first convergent denominator q < N with
/// C^q = 1 mod N (else the last one below N). Success needs a verified order
/// and non-trivial factors.
FactoringOutcome postprocess_outcome(std::string_view bits, const OrderProfile& profile);

struct LabelStatistics {
  std::string bits;
  double probability = 0.0;
  std::uint64_t count = 0;
  FactoringOutcome outcome;
};

struct PipelineStatistics {
  std::uint64_t modulus = 0;
  std::uint64_t base = 0;
  Level level = Level::Full;
  int argument_width = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<LabelStatistics> labels;
  std::uint64_t successes = 0;
  std::uint64_t expected_failures = 0;
  std::uint64_t trivial = 0;

  double fraction(std::uint64_t k) const { return shots ? static_cast<double>(k) / static_cast<double>(shots) : 0.0; }
  /// Binomial standard error sqrt(p (1 - p) / shots).
  double binomial_error(std::uint64_t k) const;
  /// Success probability of the exact distribution (infinite shots).
  double exact_success() const;
};

struct PipelineConfig {
  std::uint64_t modulus = 15;
  std::uint64_t base = 2;
  std::optional<Level> level;  // full when r = 2^l, else conceptual
  std::optional<int> argument_width;
  NoiseModel noise;
  bool layout_noise_preset = false;  // derive visibilities from the circuit layout
  std::uint64_t shots = 10000;
  std::uint64_t seed = 1;
};

/// Builds, simulates (density matrix when noisy), samples and post-processes.
PipelineStatistics run_full_pipeline(const PipelineConfig& config);

}  // namespace shorlab
