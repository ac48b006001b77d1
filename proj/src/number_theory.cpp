#include "shorlab/number_theory.hpp"

#include "shorlab/errors.hpp"

#include <string>

namespace shorlab {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t n) {
  if (n == 1) return 0;
  std::uint64_t result = 1;
  base %= n;
  while (exponent > 0) {
    if (exponent & 1U) result = mul_mod(result, base, n);
    base = mul_mod(base, base, n);
    exponent >>= 1U;
  }
  return result;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int ceil_log2(std::uint64_t v) {
  int k = 0;
  while ((std::uint64_t{1} << k) < v) ++k;
  return k;
}

std::uint64_t order(std::uint64_t c, std::uint64_t n) {
  if (!(1 < c && c < n)) {
    throw PreconditionError("order requires 1 < C < N (C=" + std::to_string(c) +
                            ", N=" + std::to_string(n) + ")");
  }
  if (gcd(c, n) != 1) {
    throw PreconditionError("C=" + std::to_string(c) + " is not co-prime to N=" +
                            std::to_string(n));
  }
  std::uint64_t r = 1;
  std::uint64_t y = c % n;
  while (y != 1) {
    y = mul_mod(y, c, n);
    ++r;
  }
  return r;
}

OrderProfile OrderProfile::compute(std::uint64_t c, std::uint64_t n) {
  OrderProfile p;
  p.base = c;
  p.modulus = n;
  p.order = shorlab::order(c, n);
  if (is_power_of_two(p.order)) p.log2_order = ceil_log2(p.order);
  p.orbit.reserve(p.order);
  std::uint64_t y = 1;
  for (std::uint64_t a = 0; a < p.order; ++a) {
    p.orbit.push_back(y);
    y = mul_mod(y, c, n);
  }
  return p;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> convergents(std::uint64_t num,
                                                                 std::uint64_t den) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  // h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
  std::uint64_t h_prev = 1, h_prev2 = 0;
  std::uint64_t k_prev = 0, k_prev2 = 1;
  while (den != 0) {
    const std::uint64_t a = num / den;
    const std::uint64_t h = a * h_prev + h_prev2;
    const std::uint64_t k = a * k_prev + k_prev2;
    out.emplace_back(h, k);
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const std::uint64_t rem = num % den;
    num = den;
    den = rem;
  }
  return out;
}

}  // namespace shorlab
