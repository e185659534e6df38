#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "primelab/compensated.hpp"
#include "primelab/sieve.hpp"

namespace primelab {

/// Controls for the parallel prime folds. The segment grid is fixed by
/// `segment_size` alone, so results are byte-identical for any thread count.
struct FoldOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
  std::uint64_t segment_size = kDefaultSegmentSize;
};

inline unsigned resolved_threads(const FoldOptions& opt) {
  if (opt.threads != 0) return opt.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Result of folding N compensated sums of per-prime terms over [2, limit],
/// with snapshots at each requested inclusive cutoff.
template <std::size_t N>
struct PrimeFoldResult {
  std::array<double, N> total{};
  std::uint64_t count = 0;  // primes folded in total
  std::vector<std::array<double, N>> at;  // one snapshot per cutoff
  std::vector<std::uint64_t> count_at;
};

namespace detail {

template <std::size_t N>
struct SegmentPartial {
  std::array<double, N> total{};
  std::uint64_t count = 0;
  // Snapshots for the cutoffs that land inside this segment, in cutoff order.
  std::vector<std::array<double, N>> at;
  std::vector<std::uint64_t> count_at;
};

}  // namespace detail

/// Streams the primes p <= limit once and accumulates term(p) into N
/// compensated sums, snapshotting the partial sums at each cutoff.
///
/// `cutoffs` must be sorted ascending, each <= limit; snapshot i covers the
/// primes p <= cutoffs[i]. `term` is called as term(p, std::array<double,N>&)
/// and fills the per-prime contribution.
///
/// Segments are processed by a worker pool but merged in index order, so the
/// result does not depend on the thread count.
template <std::size_t N, typename TermFn>
PrimeFoldResult<N> fold_primes(std::uint64_t limit,
                               std::span<const std::uint64_t> cutoffs,
                               TermFn term, const FoldOptions& opt = {}) {
  if (limit < 2) throw std::invalid_argument("fold_primes: limit must be >= 2");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] > limit || (i > 0 && cutoffs[i] < cutoffs[i - 1])) {
      throw std::invalid_argument(
          "fold_primes: cutoffs must be ascending and <= limit");
    }
  }

  const std::uint64_t seg =
      effective_segment_size(SieveConfig{limit, opt.segment_size});
  const auto base = small_primes(
      static_cast<std::uint32_t>(integer_sqrt(limit)));
  std::span<const std::uint32_t> odd_base(base);
  if (!odd_base.empty() && odd_base.front() == 2) odd_base = odd_base.subspan(1);

  // Fixed segment grid over the odd integers in [3, limit].
  const std::uint64_t n_segments = limit < 3 ? 0 : (limit - 3) / seg + 1;
  std::vector<detail::SegmentPartial<N>> partials(n_segments);

  auto run_segment = [&](std::uint64_t s) {
    // Segment grid: segment s covers odds in [3 + s*seg, 3 + (s+1)*seg).
    const std::uint64_t raw_lo = 3 + s * seg;
    const std::uint64_t start = raw_lo | 1;  // first odd >= raw_lo
    std::uint64_t hi = raw_lo + seg;
    if (hi > limit + 1) hi = limit + 1;
    if (start >= hi) return;

    std::vector<std::uint64_t> bits;
    detail::sieve_odd_segment(start, hi, odd_base, bits);

    detail::SegmentPartial<N>& part = partials[s];
    std::array<CompensatedSum, N> acc;
    std::uint64_t count = 0;

    // Cutoffs that land inside [start, hi).
    std::size_t ci = 0;
    while (ci < cutoffs.size() && cutoffs[ci] < start) ++ci;
    const std::uint64_t n_odds = (hi - start + 1) / 2;
    for (std::uint64_t i = 0; i < n_odds; ++i) {
      const std::uint64_t p = start + 2 * i;
      while (ci < cutoffs.size() && cutoffs[ci] < p && cutoffs[ci] < hi) {
        std::array<double, N> snap;
        for (std::size_t j = 0; j < N; ++j) snap[j] = acc[j].value();
        part.at.push_back(snap);
        part.count_at.push_back(count);
        ++ci;
      }
      if (bits[i >> 6] >> (i & 63) & 1) continue;
      std::array<double, N> contrib{};
      term(p, contrib);
      for (std::size_t j = 0; j < N; ++j) acc[j].add(contrib[j]);
      ++count;
    }
    while (ci < cutoffs.size() && cutoffs[ci] < hi) {
      std::array<double, N> snap;
      for (std::size_t j = 0; j < N; ++j) snap[j] = acc[j].value();
      part.at.push_back(snap);
      part.count_at.push_back(count);
      ++ci;
    }
    for (std::size_t j = 0; j < N; ++j) part.total[j] = acc[j].value();
    part.count = count;
  };

  const unsigned threads = resolved_threads(opt);
  if (threads <= 1 || n_segments <= 1) {
    for (std::uint64_t s = 0; s < n_segments; ++s) run_segment(s);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t s = next.fetch_add(1);
          if (s >= n_segments) return;
          run_segment(s);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Sequential merge in segment order.
  PrimeFoldResult<N> result;
  result.at.reserve(cutoffs.size());
  result.count_at.reserve(cutoffs.size());
  std::array<CompensatedSum, N> global;
  std::uint64_t global_count = 0;

  // p = 2 folds in first.
  {
    std::array<double, N> contrib{};
    term(std::uint64_t{2}, contrib);
    for (std::size_t j = 0; j < N; ++j) global[j].add(contrib[j]);
    global_count = 1;
  }
  std::size_t ci = 0;
  while (ci < cutoffs.size() && cutoffs[ci] < 3) {
    std::array<double, N> snap;
    for (std::size_t j = 0; j < N; ++j)
      snap[j] = cutoffs[ci] >= 2 ? global[j].value() : 0.0;
    result.at.push_back(snap);
    result.count_at.push_back(cutoffs[ci] >= 2 ? global_count : 0);
    ++ci;
  }
  for (std::uint64_t s = 0; s < n_segments; ++s) {
    const detail::SegmentPartial<N>& part = partials[s];
    for (std::size_t k = 0; k < part.at.size(); ++k) {
      std::array<double, N> snap;
      for (std::size_t j = 0; j < N; ++j)
        snap[j] = global[j].value() + part.at[k][j];
      result.at.push_back(snap);
      result.count_at.push_back(global_count + part.count_at[k]);
      ++ci;
    }
    for (std::size_t j = 0; j < N; ++j) global[j].add(part.total[j]);
    global_count += part.count;
  }
  for (std::size_t j = 0; j < N; ++j) result.total[j] = global[j].value();
  result.count = global_count;
  return result;
}

/// Single-sum convenience wrapper.
template <typename TermFn>
double fold_prime_sum(std::uint64_t limit, TermFn term,
                      const FoldOptions& opt = {}) {
  auto r = fold_primes<1>(
      limit, {},
      [&](std::uint64_t p, std::array<double, 1>& out) { out[0] = term(p); },
      opt);
  return r.total[0];
}

}  // namespace primelab
