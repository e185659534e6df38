#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace primelab {

inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 21;

/// Parameters for a segmented sieve run. `limit` is the inclusive upper bound
/// on yielded primes; `segment_size` is the count of integers per segment.
struct SieveConfig {
  std::uint64_t limit = 0;
  std::uint64_t segment_size = kDefaultSegmentSize;
};

inline void validate(const SieveConfig& cfg) {
  if (cfg.limit < 2) {
    throw std::invalid_argument("SieveConfig: limit must be >= 2, got " +
                                std::to_string(cfg.limit));
  }
  if (cfg.segment_size < 64) {
    throw std::invalid_argument("SieveConfig: segment_size must be >= 64");
  }
  if (cfg.limit >= 64 && cfg.segment_size > cfg.limit) {
    throw std::invalid_argument("SieveConfig: segment_size must be <= limit");
  }
}

// Clamp the segment to the usable range so tiny limits still work with the
// default segment size.
inline std::uint64_t effective_segment_size(const SieveConfig& cfg) {
  std::uint64_t s = cfg.segment_size;
  if (s > cfg.limit) s = cfg.limit;
  if (s < 64) s = 64;
  return s;
}

/// Simple monolithic sieve; supplies base primes for the segmented sieve and
/// handles small limits directly.
inline std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(std::size_t(limit) + 1, false);
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (!composite[i]) {
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
  }
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (!composite[i]) out.push_back(i);
  }
  return out;
}

inline std::uint64_t integer_sqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

namespace detail {

// Marks composites among the odd integers in [lo, hi), lo odd. bits[i] set
// means lo + 2*i is composite. base holds the odd primes <= sqrt(hi-1).
inline void sieve_odd_segment(std::uint64_t lo, std::uint64_t hi,
                              std::span<const std::uint32_t> base,
                              std::vector<std::uint64_t>& bits) {
  const std::uint64_t n_odds = (hi - lo + 1) / 2;
  bits.assign((n_odds + 63) / 64, 0);
  for (std::uint32_t p : base) {
    const std::uint64_t p2 = std::uint64_t(p) * p;
    if (p2 >= hi) break;
    std::uint64_t start = ((lo + p - 1) / p) * p;
    if (start < p2) start = p2;
    if ((start & 1) == 0) start += p;  // first odd multiple
    for (std::uint64_t m = start; m < hi; m += 2 * std::uint64_t(p)) {
      const std::uint64_t idx = (m - lo) / 2;
      bits[idx >> 6] |= std::uint64_t{1} << (idx & 63);
    }
  }
}

}  // namespace detail

/// Streaming enumeration of the primes in [2, limit], strictly increasing.
/// Odd-only segmented Eratosthenes underneath; memory stays O(segment_size).
class PrimeStream {
 public:
  explicit PrimeStream(SieveConfig cfg) : cfg_(cfg) {
    cfg_.segment_size = effective_segment_size(cfg_);
    validate(cfg_);
    seg_ = cfg_.segment_size;
    base_ = small_primes(static_cast<std::uint32_t>(integer_sqrt(cfg_.limit)));
    if (!base_.empty() && base_.front() == 2) base_.erase(base_.begin());
    next_lo_ = 3;
  }

  explicit PrimeStream(std::uint64_t limit) : PrimeStream(SieveConfig{limit}) {}

  const SieveConfig& config() const { return cfg_; }

  std::optional<std::uint64_t> next() {
    if (!emitted_two_) {
      emitted_two_ = true;
      if (cfg_.limit >= 2) return 2;
    }
    while (pos_ >= buffer_.size()) {
      if (!fill_next_segment()) return std::nullopt;
    }
    return buffer_[pos_++];
  }

  template <typename F>
  void for_each(F&& f) {
    while (auto p = next()) f(*p);
  }

 private:
  bool fill_next_segment() {
    if (next_lo_ > cfg_.limit) return false;
    std::uint64_t lo = next_lo_;
    std::uint64_t hi = lo + seg_;
    if (hi > cfg_.limit + 1) hi = cfg_.limit + 1;
    detail::sieve_odd_segment(lo, hi, base_, bits_);
    buffer_.clear();
    pos_ = 0;
    const std::uint64_t n_odds = (hi - lo + 1) / 2;
    for (std::uint64_t i = 0; i < n_odds; ++i) {
      if (!(bits_[i >> 6] >> (i & 63) & 1)) buffer_.push_back(lo + 2 * i);
    }
    next_lo_ = hi + ((hi & 1) ? 0 : 1);  // keep segment start odd
    return true;
  }

  SieveConfig cfg_;
  std::uint64_t seg_ = 0;
  std::vector<std::uint32_t> base_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> buffer_;
  std::size_t pos_ = 0;
  std::uint64_t next_lo_ = 3;
  bool emitted_two_ = false;
};

/// All primes in [2, limit] as a materialized vector.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  if (limit < 2) {
    throw std::invalid_argument("primes_up_to: limit must be >= 2");
  }
  std::vector<std::uint64_t> out;
  PrimeStream stream(limit);
  stream.for_each([&](std::uint64_t p) { out.push_back(p); });
  return out;
}

inline std::uint64_t prime_count(std::uint64_t limit) {
  if (limit < 2) return 0;
  std::uint64_t n = 0;
  PrimeStream stream(limit);
  stream.for_each([&](std::uint64_t) { ++n; });
  return n;
}

/// A consecutive-prime pair with gap h = p_hi - p_lo.
struct GapPair {
  std::uint64_t p_lo = 0;
  std::uint64_t p_hi = 0;
  std::uint64_t h = 0;
};

/// All consecutive-prime pairs (p_k, p_{k+1}) with p_{k+1} <= limit and gap h.
/// Odd h yields only (2, 3) when h == 1; larger odd gaps cannot occur.
inline std::vector<GapPair> gap_pairs(std::uint64_t limit, std::int64_t h) {
  if (h <= 0) throw std::invalid_argument("gap_pairs: h must be positive");
  const auto gap = static_cast<std::uint64_t>(h);
  std::vector<GapPair> out;
  if (limit < 3) return out;
  PrimeStream stream(limit);
  std::uint64_t prev = 0;
  stream.for_each([&](std::uint64_t p) {
    if (prev != 0 && p - prev == gap) out.push_back({prev, p, gap});
    prev = p;
  });
  return out;
}

/// Every consecutive pair (p_k, p_{k+1}) with p_{k+1} <= limit, any gap.
inline std::vector<GapPair> consecutive_pairs(std::uint64_t limit) {
  std::vector<GapPair> out;
  if (limit < 3) return out;
  PrimeStream stream(limit);
  std::uint64_t prev = 0;
  stream.for_each([&](std::uint64_t p) {
    if (prev != 0) out.push_back({prev, p, p - prev});
    prev = p;
  });
  return out;
}

}  // namespace primelab
