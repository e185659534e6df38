// Independent oracles for the test suites. Everything here recomputes the
// expected values from first principles (trial division, exact rationals,
// brute-force interval loops) without touching the library's sieve or
// accumulator paths.
#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace oracles {

inline bool is_prime_trial_division(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> trial_division_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (is_prime_trial_division(n)) out.push_back(n);
  }
  return out;
}

// Secondary sieve oracle: monolithic vector<bool>, no segmentation, no odd
// packing; shares nothing with the library implementation.
inline std::uint64_t monolithic_sieve_count(std::uint64_t limit) {
  if (limit < 2) return 0;
  std::vector<bool> composite(limit + 1, false);
  std::uint64_t count = 0;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    ++count;
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return count;
}

// Exact rational prod (1 - c/p) over primes c < p < x, integer c.
inline mpq_class rational_product_strict(std::uint64_t x, std::uint64_t c) {
  mpq_class prod(1);
  for (std::uint64_t p = 2; p < x; ++p) {
    if (p <= c || !is_prime_trial_division(p)) continue;
    prod *= mpq_class(static_cast<unsigned long>(p - c),
                      static_cast<unsigned long>(p));
  }
  prod.canonicalize();
  return prod;
}

// Exact rational sum of 1/p^e over primes p <= x.
inline mpq_class rational_prime_sum(std::uint64_t x, int exponent,
                                    bool include_two) {
  mpq_class sum(0);
  for (std::uint64_t p = 2; p <= x; ++p) {
    if (!is_prime_trial_division(p)) continue;
    if (p == 2 && !include_two) continue;
    const std::uint64_t denom = exponent == 1 ? p : p * p;
    sum += mpq_class(1, static_cast<unsigned long>(denom));
  }
  sum.canonicalize();
  return sum;
}

// Brute-force survivor enumeration: per-integer modular check against every
// choice, double loop, no marking.
struct BruteChoice {
  std::uint64_t p, r1, r2;
};

inline std::vector<std::uint64_t> brute_force_survivors(
    std::uint64_t lo, std::uint64_t hi, const std::vector<BruteChoice>& choices,
    bool odd_only) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo; n < hi; ++n) {
    if (odd_only && n % 2 == 0) continue;
    bool hit = false;
    for (const auto& ch : choices) {
      const std::uint64_t r = n % ch.p;
      if (r == ch.r1 || r == ch.r2) {
        hit = true;
        break;
      }
    }
    if (!hit) out.push_back(n);
  }
  return out;
}

}  // namespace oracles
