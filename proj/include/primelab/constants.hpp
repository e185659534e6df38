#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "primelab/fold.hpp"

namespace primelab {

/// Euler–Mascheroni constant, fixed literal to 35 digits.
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

inline constexpr std::uint64_t kDefaultConstantTruncation = 1'000'000'000;

/// Truncated sum over primes of 1/p or 1/p^2, with or without the p = 2 term.
struct PrimeSumResult {
  double x = 0.0;
  double value = 0.0;
  bool include_two = true;
  int exponent = 1;
  std::uint64_t terms = 0;  // primes folded in
};

namespace detail {

// Inclusive integer cutoff for "primes p <= x" (inclusive) or "p < x" (strict).
inline std::uint64_t bound_to_cutoff(double x, bool inclusive) {
  if (x < 2.0) return 0;
  const double f = std::floor(x);
  if (inclusive) return static_cast<std::uint64_t>(f);
  // strict p < x: for integral x the bound excludes x itself
  return static_cast<std::uint64_t>(f == x ? f - 1.0 : f);
}

}  // namespace detail

/// Compensated sum of 1/p^exponent over primes p <= x (2 < p <= x when
/// include_two is false). `inclusive=false` switches the boundary to p < x.
inline PrimeSumResult prime_sum(double x, int exponent, bool include_two,
                                bool inclusive = true,
                                const FoldOptions& opt = {}) {
  if (!(x >= 3.0)) throw std::invalid_argument("prime_sum: x must be >= 3");
  if (exponent != 1 && exponent != 2) {
    throw std::invalid_argument("prime_sum: exponent must be 1 or 2");
  }
  const std::uint64_t cutoff = detail::bound_to_cutoff(x, inclusive);
  PrimeSumResult result;
  result.x = x;
  result.include_two = include_two;
  result.exponent = exponent;
  if (cutoff < 2) return result;

  // Odd primes accumulate compensated; the p = 2 term, when requested, is a
  // single exact dyadic added last. The with/without values then differ by
  // exactly 1/2 or 1/4 up to one final rounding.
  auto fold = fold_primes<1>(
      cutoff, {},
      [&](std::uint64_t p, std::array<double, 1>& out) {
        if (p == 2) return;
        const double inv = 1.0 / static_cast<double>(p);
        out[0] = exponent == 1 ? inv : inv * inv;
      },
      opt);
  result.value = fold.total[0];
  result.terms = fold.count - 1;  // fold.count includes p = 2
  if (include_two) {
    result.value += exponent == 1 ? 0.5 : 0.25;
    result.terms += 1;
  }
  return result;
}

/// Meissel–Mertens constant via the convergent series
/// M1 = gamma + sum over primes of [ln(1 - 1/p) + 1/p], truncated at
/// `truncation`; the dropped tail is below 1/(2*truncation).
inline double meissel_mertens(
    std::uint64_t truncation = kDefaultConstantTruncation,
    const FoldOptions& opt = {}) {
  if (truncation < 2) {
    throw std::invalid_argument("meissel_mertens: truncation must be >= 2");
  }
  const double series = fold_prime_sum(
      truncation,
      [](std::uint64_t p) {
        const double inv = 1.0 / static_cast<double>(p);
        return std::log1p(-inv) + inv;
      },
      opt);
  return kEulerGamma + series;
}

/// Prime zeta at 2: direct sum of 1/p^2 over p <= truncation; dropped tail is
/// below 1/truncation.
inline double prime_square_sum(
    std::uint64_t truncation = kDefaultConstantTruncation,
    const FoldOptions& opt = {}) {
  if (truncation < 2) {
    throw std::invalid_argument("prime_square_sum: truncation must be >= 2");
  }
  return fold_prime_sum(
      truncation,
      [](std::uint64_t p) {
        const double inv = 1.0 / static_cast<double>(p);
        return inv * inv;
      },
      opt);
}

/// The constants governing the (1 - 2/p) product asymptotic.
struct ConstantBundle {
  double m1 = 0.0;        // Meissel–Mertens constant
  double s = 0.0;         // sum of 1/p^2 over all primes
  double c2_tilde = 0.0;  // exp(1.5 - 2*(m1 + s))
  int digits = 0;         // decimal digits guaranteed by the truncation bounds
};

/// Computes m1, s, and c2_tilde = exp(1.5 - 2*(m1 + s)) in a single pass over
/// the primes up to `truncation`.
inline ConstantBundle c2_tilde(
    std::uint64_t truncation = kDefaultConstantTruncation,
    const FoldOptions& opt = {}) {
  if (truncation < 2) {
    throw std::invalid_argument("c2_tilde: truncation must be >= 2");
  }
  auto fold = fold_primes<2>(
      truncation, {},
      [](std::uint64_t p, std::array<double, 2>& out) {
        const double inv = 1.0 / static_cast<double>(p);
        out[0] = std::log1p(-inv) + inv;
        out[1] = inv * inv;
      },
      opt);
  ConstantBundle bundle;
  bundle.m1 = kEulerGamma + fold.total[0];
  bundle.s = fold.total[1];
  bundle.c2_tilde = std::exp(1.5 - 2.0 * (bundle.m1 + bundle.s));
  // Truncation bounds: |m1 error| <= 1/(2B), |s error| <= 1/B, which propagate
  // to a relative 2*(1/(2B) + 1/B) on c2_tilde. The s bound dominates.
  const double b = static_cast<double>(truncation);
  const double worst = 3.0 / b + 1e-13;  // 1e-13 covers float accumulation
  bundle.digits = static_cast<int>(std::floor(-std::log10(worst)));
  return bundle;
}

}  // namespace primelab
