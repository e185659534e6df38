#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "primelab/constants.hpp"
#include "primelab/fold.hpp"

namespace primelab {

/// State of a truncated log-product sum(ln(1 - c/p)) over primes c < p < x.
struct LogProductAccumulator {
  double log_value = 0.0;
  std::uint64_t terms = 0;
  double c = 2.0;
  double x = 0.0;
};

namespace detail {

inline void check_product_args(double x, double c) {
  if (!(c >= 1.0)) throw std::invalid_argument("product: c must be >= 1");
  if (!(x > c)) throw std::invalid_argument("product: x must exceed c");
}

}  // namespace detail

/// Evaluates several truncation points of the same product in one pass over
/// the primes. `xs` must be ascending. Truncation is strict (p < x) unless
/// `inclusive` is set. Primes p <= c never fold in: for c = 2 the factor at
/// p = 2 would be zero and kill the product.
inline std::vector<LogProductAccumulator> product_log_scan(
    std::span<const double> xs, double c, bool inclusive = false,
    const FoldOptions& opt = {}) {
  if (xs.empty()) return {};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    detail::check_product_args(xs[i], c);
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      throw std::invalid_argument("product_log_scan: xs must be ascending");
    }
  }
  std::vector<std::uint64_t> cutoffs;
  cutoffs.reserve(xs.size());
  for (double x : xs) cutoffs.push_back(detail::bound_to_cutoff(x, inclusive));

  std::vector<LogProductAccumulator> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i].c = c;
    out[i].x = xs[i];
  }
  const std::uint64_t limit = cutoffs.back();
  if (limit < 2) return out;  // no primes below any truncation point

  auto fold = fold_primes<1>(
      limit, cutoffs,
      [&](std::uint64_t p, std::array<double, 1>& term) {
        const double pd = static_cast<double>(p);
        if (pd <= c) {
          term[0] = 0.0;  // excluded factor, counted separately below
        } else {
          term[0] = std::log1p(-c / pd);
        }
      },
      opt);

  // fold counts every prime; subtract the excluded p <= c ones.
  const std::uint64_t excluded =
      small_primes(static_cast<std::uint32_t>(std::min(std::floor(c), 4294967295.0)))
          .size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i].log_value = fold.at[i][0];
    const std::uint64_t counted = fold.count_at[i];
    out[i].terms = counted > excluded ? counted - excluded : 0;
  }
  return out;
}

/// ln P(x) = sum of ln(1 - c/p) over primes c < p < x, compensated.
inline double product_log(double x, double c, bool inclusive = false,
                          const FoldOptions& opt = {}) {
  const double xs[] = {x};
  return product_log_scan(xs, c, inclusive, opt).front().log_value;
}

/// P(x) = prod over primes c < p < x of (1 - c/p).
inline double product_value(double x, double c, bool inclusive = false,
                            const FoldOptions& opt = {}) {
  return std::exp(product_log(x, c, inclusive, opt));
}

/// Ratios P(x)(ln x)^c / C over a grid of truncation points, plus the
/// least-squares K of the residual model ratio = 1 + K/ln x (fit through the
/// forced intercept 1).
struct AsymptoticFit {
  std::vector<double> xs;
  std::vector<double> ratios;
  std::vector<double> values;  // P(x) at each truncation point
  double residual_slope = 0.0;
  double scale = 0.0;  // the C the ratios were computed against
};

inline double residual_slope_fit(std::span<const double> xs,
                                 std::span<const double> ratios) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = 1.0 / std::log(xs[i]);
    num += u * (ratios[i] - 1.0);
    den += u * u;
  }
  return den > 0.0 ? num / den : 0.0;
}

/// Scans P(x)(ln x)^c / C over ascending xs. Pass C <= 0 to fit the scale
/// from the largest truncation point instead of asserting one.
inline AsymptoticFit asymptotic_ratio_scan(std::span<const double> xs, double c,
                                           double C,
                                           const FoldOptions& opt = {}) {
  if (xs.empty()) throw std::invalid_argument("asymptotic_ratio_scan: empty xs");
  if (!(xs.front() >= 100.0)) {
    throw std::invalid_argument("asymptotic_ratio_scan: min(xs) must be >= 100");
  }
  auto logs = product_log_scan(xs, c, false, opt);
  AsymptoticFit fit;
  fit.xs.assign(xs.begin(), xs.end());
  fit.values.reserve(xs.size());
  for (const auto& acc : logs) fit.values.push_back(std::exp(acc.log_value));
  double scale = C;
  if (!(scale > 0.0)) {
    scale = fit.values.back() * std::pow(std::log(xs.back()), c);
  }
  fit.scale = scale;
  fit.ratios.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.ratios.push_back(fit.values[i] * std::pow(std::log(xs[i]), c) / scale);
  }
  fit.residual_slope = residual_slope_fit(fit.xs, fit.ratios);
  return fit;
}

}  // namespace primelab
