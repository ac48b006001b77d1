#pragma once

#include <cstdint>
#include <random>

namespace shorlab {

/// Seeded std::mt19937_64 with reproducible child streams: stream s of seed k
/// is seeded from seed_seq{k, s}.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), engine_(seeded(seed, stream)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Independent child stream; does not advance this generator.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream + 1); }

 private:
  static std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace shorlab
