#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace shorlab {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t n);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

inline bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }
/// ceil(log2 v) for v >= 1.
int ceil_log2(std::uint64_t v);

/// Minimal r with C^r = 1 mod N, by orbit iteration. Throws PreconditionError
/// unless 1 < C < N and gcd(C, N) = 1.
std::uint64_t order(std::uint64_t c, std::uint64_t n);

struct OrderProfile {
  std::uint64_t base = 0;
  std::uint64_t modulus = 0;
  std::uint64_t order = 0;
  std::optional<int> log2_order;    // l when r = 2^l
  std::vector<std::uint64_t> orbit;  // C^a mod N for a in [0, r)

  static OrderProfile compute(std::uint64_t c, std::uint64_t n);
  bool power_of_two_order() const { return log2_order.has_value(); }
};

/// Convergents p/q of the continued-fraction expansion of num/den.
std::vector<std::pair<std::uint64_t, std::uint64_t>> convergents(std::uint64_t num,
                                                                 std::uint64_t den);

}  // namespace shorlab
