#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "primelab/products.hpp"
#include "primelab/sieve.hpp"

namespace primelab {

/// Smooth main-term function R~(p) = (c2/4) * p^2 / (ln p)^2.
inline double r_tilde(double p, double c2) {
  if (!(p > 1.0)) throw std::invalid_argument("r_tilde: p must exceed 1");
  if (!(c2 > 0.0)) throw std::invalid_argument("r_tilde: c2 must be positive");
  const double lp = std::log(p);
  return 0.25 * c2 * p * p / (lp * lp);
}

/// Discrete h-step difference of p^2/(ln p)^2 against its 2hp/(ln p)^2 main
/// term. residual_scaled = (lhs - main) * (ln p)^3 / p stays bounded in p.
struct DiscreteDifference {
  double lhs = 0.0;
  double main = 0.0;
  double residual_scaled = 0.0;
};

inline DiscreteDifference discrete_difference_check(double p, std::uint64_t h) {
  if (h == 0) return {};  // degenerate gap
  if (!(p >= 10.0)) {
    throw std::invalid_argument("discrete_difference_check: p must be >= 10");
  }
  const double hd = static_cast<double>(h);
  const double lp = std::log(p);
  const double lph = std::log(p + hd);
  DiscreteDifference d;
  d.lhs = (p + hd) * (p + hd) / (lph * lph) - p * p / (lp * lp);
  d.main = 2.0 * hd * p / (lp * lp);
  d.residual_scaled = (d.lhs - d.main) * lp * lp * lp / p;
  return d;
}

/// One fixed-gap pair with its exact telescoping difference and the main-term
/// comparison from the product asymptotic.
struct DeltaRecord {
  GapPair pair;
  double delta_exact = 0.0;  // p_hi^2 P(p_hi^2) - p_lo^2 P(p_lo^2)
  double main_term = 0.0;    // (c2*h/2) * p_lo / (ln p_lo)^2
  double ratio = 0.0;
  double r_tilde_lo = 0.0;
  double r_tilde_hi = 0.0;
};

namespace detail {

// Exact p^2 * P(p^2) for each prime in `ps` (ascending, unique), one pass.
inline std::vector<double> squared_product_values(
    const std::vector<std::uint64_t>& ps, const FoldOptions& opt) {
  std::vector<double> xs;
  xs.reserve(ps.size());
  for (std::uint64_t p : ps) {
    xs.push_back(static_cast<double>(p) * static_cast<double>(p));
  }
  auto logs = product_log_scan(xs, 2.0, false, opt);
  std::vector<double> out;
  out.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out.push_back(xs[i] * std::exp(logs[i].log_value));
  }
  return out;
}

inline std::vector<DeltaRecord> delta_records_for_pairs(
    const std::vector<GapPair>& pairs, double c2, const FoldOptions& opt) {
  std::vector<DeltaRecord> out;
  if (pairs.empty()) return out;
  std::vector<std::uint64_t> ps;
  ps.reserve(pairs.size() * 2);
  for (const auto& g : pairs) {
    ps.push_back(g.p_lo);
    ps.push_back(g.p_hi);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  const auto values = squared_product_values(ps, opt);
  auto value_of = [&](std::uint64_t p) {
    const auto it = std::lower_bound(ps.begin(), ps.end(), p);
    return values[static_cast<std::size_t>(it - ps.begin())];
  };
  out.reserve(pairs.size());
  for (const auto& g : pairs) {
    DeltaRecord rec;
    rec.pair = g;
    rec.delta_exact = value_of(g.p_hi) - value_of(g.p_lo);
    const double p = static_cast<double>(g.p_lo);
    const double lp = std::log(p);
    rec.main_term = 0.5 * c2 * static_cast<double>(g.h) * p / (lp * lp);
    rec.ratio = rec.delta_exact / rec.main_term;
    rec.r_tilde_lo = r_tilde(p, c2);
    rec.r_tilde_hi = r_tilde(static_cast<double>(g.p_hi), c2);
    out.push_back(rec);
  }
  return out;
}

}  // namespace detail

/// Delta_k over all fixed-gap pairs with p_hi^2 <= limit. delta_exact comes
/// from exact truncated products at x = p^2, not from the asymptotic.
inline std::vector<DeltaRecord> delta_scan(std::uint64_t limit, std::int64_t h,
                                           double c2,
                                           const FoldOptions& opt = {}) {
  if (limit < 9) throw std::invalid_argument("delta_scan: limit must be >= 9");
  const std::uint64_t p_max = integer_sqrt(limit);
  auto pairs = gap_pairs(p_max, h);
  return detail::delta_records_for_pairs(pairs, c2, opt);
}

/// Same records over every consecutive pair (no gap filter) with
/// p_hi^2 <= limit; feeds the average-gap comparison and telescoping checks.
inline std::vector<DeltaRecord> delta_scan_all(std::uint64_t limit, double c2,
                                               const FoldOptions& opt = {}) {
  if (limit < 9) throw std::invalid_argument("delta_scan_all: limit must be >= 9");
  auto pairs = consecutive_pairs(integer_sqrt(limit));
  return detail::delta_records_for_pairs(pairs, c2, opt);
}

/// Unrestricted-gap statistics: with gaps averaging ln p, Delta_k runs one
/// factor of ln p above the fixed-gap scale p/(ln p)^2.
struct AverageGapSummary {
  std::uint64_t pairs = 0;
  double mean_delta_log_over_p = 0.0;    // mean of Delta * ln(p_lo) / p_lo
  double mean_delta_log2_over_p = 0.0;   // mean of Delta * (ln p_lo)^2 / p_lo
  double mean_gap_over_log_top_decade = 0.0;  // mean (p_hi-p_lo)/ln p_lo, top decade
};

inline AverageGapSummary average_gap_comparison(std::uint64_t limit, double c2,
                                                const FoldOptions& opt = {}) {
  if (limit < 100) {
    throw std::invalid_argument("average_gap_comparison: limit must be >= 100");
  }
  auto records = delta_scan_all(limit, c2, opt);
  AverageGapSummary summary;
  summary.pairs = records.size();
  if (records.empty()) return summary;
  CompensatedSum s1, s2;
  for (const auto& rec : records) {
    const double p = static_cast<double>(rec.pair.p_lo);
    const double lp = std::log(p);
    s1.add(rec.delta_exact * lp / p);
    s2.add(rec.delta_exact * lp * lp / p);
  }
  const double n = static_cast<double>(records.size());
  summary.mean_delta_log_over_p = s1.value() / n;
  summary.mean_delta_log2_over_p = s2.value() / n;

  const std::uint64_t top_cut = records.back().pair.p_lo / 10;
  CompensatedSum sg;
  std::uint64_t top_n = 0;
  for (const auto& rec : records) {
    if (rec.pair.p_lo >= top_cut) {
      sg.add(static_cast<double>(rec.pair.h) /
             std::log(static_cast<double>(rec.pair.p_lo)));
      ++top_n;
    }
  }
  if (top_n > 0) {
    summary.mean_gap_over_log_top_decade = sg.value() / static_cast<double>(top_n);
  }
  return summary;
}

}  // namespace primelab
