#include "shorlab/classical.hpp"

#include "shorlab/errors.hpp"

#include <cmath>

namespace shorlab {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::ExpectedFailure: return "expected-failure";
    case Outcome::TrivialFactors: return "trivial-factors";
  }
  return "?";
}

std::optional<FactorPair> factors_from_order(std::uint64_t c, std::uint64_t r, std::uint64_t n) {
  if (r == 0 || r % 2 != 0) return std::nullopt;
  const std::uint64_t half = pow_mod(c, r / 2, n);
  const std::uint64_t a = gcd((half + n - 1) % n, n);
  const std::uint64_t b = gcd((half + 1) % n, n);
  for (std::uint64_t f : {a, b}) {
    if (f > 1 && f < n) {
      const std::uint64_t g = n / f;
      return FactorPair{std::min(f, g), std::max(f, g)};
    }
  }
  return std::nullopt;
}

FactoringOutcome postprocess_outcome(std::string_view bits, const OrderProfile& profile) {
  FactoringOutcome out;
  out.bits = std::string(bits);
  const int n = static_cast<int>(bits.size());
  if (n < 1 || n > 62) throw PreconditionError("outcome bitstring length must be in [1, 62]");
  std::uint64_t x = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw PreconditionError("outcome must be a bitstring");
    x = (x << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  if (x == 0) {
    out.classification = Outcome::ExpectedFailure;
    return out;
  }
  std::uint64_t fallback = 0;
  for (const auto& [p, q] : convergents(x, std::uint64_t{1} << n)) {
    (void)p;
    if (q >= profile.modulus) break;
    fallback = q;
    if (pow_mod(profile.base, q, profile.modulus) == 1) {
      out.candidate_order = q;
      break;
    }
  }
  if (out.candidate_order == 0) out.candidate_order = fallback;
  const bool verified = out.candidate_order != 0 && pow_mod(profile.base, out.candidate_order, profile.modulus) == 1;
  out.factors = verified ? factors_from_order(profile.base, out.candidate_order, profile.modulus) : std::nullopt;
  out.classification = out.factors ? Outcome::Success : Outcome::TrivialFactors;
  return out;
}

double PipelineStatistics::binomial_error(std::uint64_t k) const {
  if (shots == 0) return 0.0;
  const double p = fraction(k);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
}

double PipelineStatistics::exact_success() const {
  double s = 0.0;
  for (const auto& l : labels) {
    if (l.outcome.classification == Outcome::Success) s += l.probability;
  }
  return s;
}

PipelineStatistics run_full_pipeline(const PipelineConfig& config) {
  const auto profile = OrderProfile::compute(config.base, config.modulus);
  PipelineStatistics stats;
  stats.modulus = config.modulus;
  stats.base = config.base;
  stats.level = config.level.value_or(profile.power_of_two_order() ? Level::Full : Level::Conceptual);
  stats.argument_width = config.argument_width.value_or(default_argument_width(config.modulus, config.base));
  stats.shots = config.shots;
  stats.seed = config.seed;

  const Circuit c = build_order_finding_circuit(config.modulus, config.base, stats.argument_width, stats.level);
  NoiseModel noise = config.noise;
  if (config.layout_noise_preset) {
    const auto preset = layout_noise(c);
    noise.gate_visibility = preset.gate_visibility;
  }
  std::vector<double> probs;
  if (noise.noiseless()) {
    probs = register_probabilities(run_pure(c), c.argument_register, c.reverse_argument);
  } else {
    probs = register_probabilities(run_density(c, noise), c.argument_register, c.reverse_argument);
  }
  std::vector<std::uint64_t> counts(probs.size(), 0);
  if (config.shots > 0) {
    Rng rng(config.seed);
    counts = sample_counts(probs, config.shots, rng);
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    LabelStatistics l;
    l.bits = outcome_label(i, stats.argument_width);
    l.probability = probs[i];
    l.count = counts[i];
    l.outcome = postprocess_outcome(l.bits, profile);
    switch (l.outcome.classification) {
      case Outcome::Success: stats.successes += l.count; break;
      case Outcome::ExpectedFailure: stats.expected_failures += l.count; break;
      case Outcome::TrivialFactors: stats.trivial += l.count; break;
    }
    stats.labels.push_back(std::move(l));
  }
  return stats;
}

}  // namespace shorlab
