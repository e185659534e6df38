#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "primelab/sieve.hpp"

namespace primelab {

/// Reproducible 64-bit linear congruential generator (Knuth MMIX constants:
/// state <- state * 6364136223846793005 + 1442695040888963407), with an
/// xorshift output mix. Specified explicitly so runs reproduce across
/// implementations; no ambient entropy.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed ^ 0x9E3779B97F4A7C15ull) {
    next();  // decorrelate trivially related seeds
  }

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
    std::uint64_t z = state_;
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDull;
    z ^= z >> 33;
    return z;
  }

  // Uniform draw in [0, m) by 128-bit multiply-high reduction.
  std::uint64_t below(std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * m) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Two forbidden residues modulo a prime. For p = 2 a single class is used
/// (r1 == r2); two distinct classes mod 2 would cover every integer.
struct ResidueChoice {
  std::uint64_t p = 0;
  std::uint64_t r1 = 0;
  std::uint64_t r2 = 0;
};

enum class Parity { all, odd_only };

/// One interval experiment: residue choices for every prime in scope over
/// [p_lo^2, p_hi^2). Default scope is 2 < p <= p_lo; include_two adds p = 2
/// with one residue class.
struct CoverageExperiment {
  GapPair pair;
  std::uint64_t lo = 0;  // p_lo^2
  std::uint64_t hi = 0;  // p_hi^2, exclusive unless include_right
  std::vector<ResidueChoice> choices;
  Parity parity = Parity::all;
  bool include_right = false;
  bool include_two = false;
  std::string strategy = "fixed";
  std::uint64_t seed = 0;
};

/// Survivors of an experiment plus the heuristic prediction
/// predicted_count = interval_count * prod(1 - 2/p).
struct CoverageResult {
  std::vector<std::uint64_t> uncovered;
  std::uint64_t uncovered_count = 0;
  double covered_fraction = 0.0;
  double predicted_fraction = 0.0;
  double predicted_count = 0.0;
};

namespace detail {

inline void validate_choice(const ResidueChoice& ch) {
  if (ch.p < 2) throw std::invalid_argument("ResidueChoice: p must be prime >= 2");
  if (ch.r1 >= ch.p || ch.r2 >= ch.p) {
    throw std::invalid_argument("ResidueChoice: residues must lie in [0, p)");
  }
  if (ch.p > 2 && ch.r1 == ch.r2) {
    throw std::invalid_argument(
        "ResidueChoice: residues must be distinct for p > 2");
  }
  if (ch.p == 2 && ch.r1 != ch.r2) {
    throw std::invalid_argument(
        "ResidueChoice: p = 2 carries a single class (set r1 == r2)");
  }
}

// Primes in scope for a pair: 2 < p <= p_lo, optionally prefixed by 2.
inline std::vector<std::uint64_t> scope_primes(const GapPair& pair,
                                               bool include_two) {
  std::vector<std::uint64_t> ps;
  for (std::uint32_t q : small_primes(static_cast<std::uint32_t>(pair.p_lo))) {
    if (q == 2 && !include_two) continue;
    ps.push_back(q);
  }
  return ps;
}

}  // namespace detail

inline void validate_experiment(const CoverageExperiment& e) {
  if (e.lo >= e.hi) throw std::invalid_argument("CoverageExperiment: lo < hi required");
  for (const auto& ch : e.choices) detail::validate_choice(ch);
}

/// Exact mark-and-sweep enumeration of the integers in the interval avoiding
/// every chosen residue class.
inline CoverageResult survivors(const CoverageExperiment& e) {
  validate_experiment(e);
  const std::uint64_t hi = e.hi + (e.include_right ? 1 : 0);
  const std::uint64_t len = hi - e.lo;
  std::vector<bool> covered(len, false);
  for (const auto& ch : e.choices) {
    const std::uint64_t first1 = (ch.r1 + ch.p - e.lo % ch.p) % ch.p;
    for (std::uint64_t i = first1; i < len; i += ch.p) covered[i] = true;
    if (ch.r2 != ch.r1) {
      const std::uint64_t first2 = (ch.r2 + ch.p - e.lo % ch.p) % ch.p;
      for (std::uint64_t i = first2; i < len; i += ch.p) covered[i] = true;
    }
  }

  CoverageResult result;
  double population = 0.0;
  for (std::uint64_t i = 0; i < len; ++i) {
    const std::uint64_t n = e.lo + i;
    if (e.parity == Parity::odd_only && n % 2 == 0) continue;
    population += 1.0;
    if (!covered[i]) result.uncovered.push_back(n);
  }
  result.uncovered_count = result.uncovered.size();
  if (population > 0.0) {
    result.covered_fraction =
        1.0 - static_cast<double>(result.uncovered_count) / population;
  }

  double product = 1.0;
  for (const auto& ch : e.choices) {
    const double classes = ch.p == 2 ? 1.0 : 2.0;
    product *= 1.0 - classes / static_cast<double>(ch.p);
  }
  result.predicted_fraction = 1.0 - product;
  const double interval_count = e.parity == Parity::odd_only
                                    ? static_cast<double>(len) / 2.0
                                    : static_cast<double>(len);
  result.predicted_count = interval_count * product;
  return result;
}

namespace detail {

inline CoverageExperiment base_experiment(const GapPair& pair, Parity parity,
                                          bool include_two) {
  if (pair.p_lo < 3) {
    throw std::invalid_argument("coverage: p_lo must be >= 3");
  }
  CoverageExperiment e;
  e.pair = pair;
  e.lo = pair.p_lo * pair.p_lo;
  e.hi = pair.p_hi * pair.p_hi;
  e.parity = parity;
  e.include_two = include_two;
  return e;
}

}  // namespace detail

/// Residues drawn from the seeded generator, independently per prime. The
/// per-experiment stream is keyed by (seed, p_lo) so scan rows do not depend
/// on which other pairs are present.
inline CoverageExperiment random_choices(const GapPair& pair, Parity parity,
                                         std::uint64_t seed,
                                         bool include_two = false) {
  CoverageExperiment e = detail::base_experiment(pair, parity, include_two);
  e.strategy = "random";
  e.seed = seed;
  Lcg64 rng(seed * 0x2545F4914F6CDD1Dull ^ pair.p_lo);
  for (std::uint64_t p : detail::scope_primes(pair, include_two)) {
    ResidueChoice ch;
    ch.p = p;
    if (p == 2) {
      ch.r1 = ch.r2 = rng.below(2);
    } else {
      ch.r1 = rng.below(p);
      ch.r2 = rng.below(p - 1);
      if (ch.r2 >= ch.r1) ++ch.r2;  // uniform over distinct pairs
    }
    e.choices.push_back(ch);
  }
  return e;
}

/// Deterministic rule r1 = a mod p, r2 = b mod p (nudged apart if the rule
/// collides); a cheap non-adversarial baseline.
inline CoverageExperiment fixed_choices(const GapPair& pair, Parity parity,
                                        std::uint64_t a, std::uint64_t b,
                                        bool include_two = false) {
  CoverageExperiment e = detail::base_experiment(pair, parity, include_two);
  e.strategy = "fixed";
  for (std::uint64_t p : detail::scope_primes(pair, include_two)) {
    ResidueChoice ch;
    ch.p = p;
    if (p == 2) {
      ch.r1 = ch.r2 = a % 2;
    } else {
      ch.r1 = a % p;
      ch.r2 = b % p;
      if (ch.r1 == ch.r2) ch.r2 = (ch.r2 + 1) % p;
    }
    e.choices.push_back(ch);
  }
  return e;
}

/// Adversarial residue selection: processes primes in decreasing order, each
/// time taking the two residue classes that kill the most surviving integers;
/// ties broken by the lexicographically smallest (r1, r2).
inline CoverageExperiment greedy_adversary(const GapPair& pair, Parity parity,
                                           bool include_two = false) {
  CoverageExperiment e = detail::base_experiment(pair, parity, include_two);
  e.strategy = "greedy";
  auto primes = detail::scope_primes(pair, include_two);
  std::sort(primes.rbegin(), primes.rend());

  std::vector<std::uint64_t> alive;
  for (std::uint64_t n = e.lo; n < e.hi; ++n) {
    if (parity == Parity::odd_only && n % 2 == 0) continue;
    alive.push_back(n);
  }

  for (std::uint64_t p : primes) {
    std::vector<std::uint64_t> count(p, 0);
    for (std::uint64_t n : alive) ++count[n % p];

    ResidueChoice best;
    best.p = p;
    if (p == 2) {
      // one class: the residue killing more survivors, 0 on ties
      best.r1 = best.r2 = count[1] > count[0] ? 1 : 0;
    } else {
      // kills are additive over distinct classes: take the top-two counts,
      // lexicographically smallest pair among the maximizers
      std::uint64_t top1 = 0, top2 = 0;
      for (std::uint64_t r = 0; r < p; ++r) {
        if (count[r] > top1) {
          top2 = top1;
          top1 = count[r];
        } else if (count[r] > top2) {
          top2 = count[r];
        }
      }
      const std::uint64_t target = top1 + top2;
      bool found = false;
      for (std::uint64_t r1 = 0; r1 < p && !found; ++r1) {
        for (std::uint64_t r2 = r1 + 1; r2 < p; ++r2) {
          if (count[r1] + count[r2] == target) {
            best.r1 = r1;
            best.r2 = r2;
            found = true;
            break;
          }
        }
      }
    }
    e.choices.push_back(best);

    std::vector<std::uint64_t> next;
    next.reserve(alive.size());
    for (std::uint64_t n : alive) {
      const std::uint64_t r = n % p;
      if (r != best.r1 && r != best.r2) next.push_back(n);
    }
    alive.swap(next);
  }
  // survivors() expects choices in any order; keep the greedy order for audit
  return e;
}

/// True minimum of uncovered_count over all residue choice combinations, with
/// a witness. Refuses when the combination count exceeds `budget`.
inline std::pair<std::uint64_t, CoverageExperiment> exhaustive_min_uncovered(
    const GapPair& pair, Parity parity, std::uint64_t budget,
    bool include_two = false) {
  CoverageExperiment base = detail::base_experiment(pair, parity, include_two);
  base.strategy = "exhaustive";
  auto primes = detail::scope_primes(pair, include_two);

  long double combos = 1.0L;
  for (std::uint64_t p : primes) {
    combos *= p == 2 ? 2.0L : static_cast<long double>(p * (p - 1) / 2);
  }
  if (combos > static_cast<long double>(budget)) {
    throw std::invalid_argument(
        "exhaustive_min_uncovered: " + std::to_string(static_cast<double>(combos)) +
        " combinations exceed budget " + std::to_string(budget));
  }

  // Interval as a bitset; per (prime, residue) masks precomputed.
  const std::uint64_t len = base.hi - base.lo;
  const std::size_t words = static_cast<std::size_t>((len + 63) / 64);
  std::vector<std::uint64_t> start(words, 0);
  for (std::uint64_t i = 0; i < len; ++i) {
    const std::uint64_t n = base.lo + i;
    if (parity == Parity::odd_only && n % 2 == 0) continue;
    start[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  struct ClassMask {
    std::uint64_t p, r;
    std::vector<std::uint64_t> keep;  // bit set where n % p != r
  };
  std::vector<std::vector<ClassMask>> masks;  // per prime
  for (std::uint64_t p : primes) {
    std::vector<ClassMask> per;
    for (std::uint64_t r = 0; r < p; ++r) {
      ClassMask m{p, r, std::vector<std::uint64_t>(words, ~std::uint64_t{0})};
      const std::uint64_t first = (r + p - base.lo % p) % p;
      for (std::uint64_t i = first; i < len; i += p) {
        m.keep[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
      }
      per.push_back(std::move(m));
    }
    masks.push_back(std::move(per));
  }

  std::uint64_t best_count = std::numeric_limits<std::uint64_t>::max();
  std::vector<ResidueChoice> best_choices;
  std::vector<ResidueChoice> current;

  auto popcount = [&](const std::vector<std::uint64_t>& bits) {
    std::uint64_t n = 0;
    for (std::uint64_t w : bits) n += static_cast<std::uint64_t>(__builtin_popcountll(w));
    return n;
  };

  // Depth-first over primes; survivor bitsets AND down the stack.
  std::vector<std::vector<std::uint64_t>> stack(primes.size() + 1);
  stack[0] = start;
  auto dfs = [&](auto&& self, std::size_t depth) -> void {
    if (depth == primes.size()) {
      const std::uint64_t n = popcount(stack[depth]);
      if (n < best_count) {
        best_count = n;
        best_choices = current;
      }
      return;
    }
    const std::uint64_t p = primes[depth];
    auto apply = [&](const ClassMask& m1, const ClassMask* m2) {
      auto& out = stack[depth + 1];
      out = stack[depth];
      for (std::size_t w = 0; w < words; ++w) {
        out[w] &= m1.keep[w];
        if (m2) out[w] &= m2->keep[w];
      }
    };
    if (p == 2) {
      for (std::uint64_t r = 0; r < 2; ++r) {
        apply(masks[depth][r], nullptr);
        current.push_back({p, r, r});
        self(self, depth + 1);
        current.pop_back();
      }
    } else {
      for (std::uint64_t r1 = 0; r1 < p; ++r1) {
        for (std::uint64_t r2 = r1 + 1; r2 < p; ++r2) {
          apply(masks[depth][r1], &masks[depth][r2]);
          current.push_back({p, r1, r2});
          self(self, depth + 1);
          current.pop_back();
        }
      }
    }
  };
  dfs(dfs, 0);

  base.choices = best_choices;
  return {best_count, base};
}

/// One row of an existence scan.
struct ScanRow {
  std::uint64_t p_lo = 0;
  std::uint64_t p_hi = 0;
  std::string strategy;
  std::uint64_t seed = 0;
  std::uint64_t uncovered = 0;
  double predicted = 0.0;
  bool flagged = false;  // uncovered == 0: a potential counterexample
};

/// Runs each strategy on every consecutive pair with p_hi^2 <= limit.
/// `strategies` entries: "greedy", "random" (crossed with `seeds`), "fixed".
inline std::vector<ScanRow> existence_scan(std::uint64_t limit,
                                           const std::vector<std::string>& strategies,
                                           const std::vector<std::uint64_t>& seeds,
                                           Parity parity = Parity::all,
                                           bool include_two = false) {
  if (strategies.empty()) {
    throw std::invalid_argument("existence_scan: at least one strategy");
  }
  std::vector<ScanRow> rows;
  for (const auto& pair : consecutive_pairs(integer_sqrt(limit))) {
    if (pair.p_lo < 3) continue;
    for (const auto& name : strategies) {
      std::vector<std::uint64_t> run_seeds =
          name == "random" ? seeds : std::vector<std::uint64_t>{0};
      if (run_seeds.empty()) run_seeds.push_back(0);
      for (std::uint64_t seed : run_seeds) {
        CoverageExperiment e;
        if (name == "greedy") {
          e = greedy_adversary(pair, parity, include_two);
        } else if (name == "random") {
          e = random_choices(pair, parity, seed, include_two);
        } else if (name == "fixed") {
          e = fixed_choices(pair, parity, 0, 1, include_two);
        } else {
          throw std::invalid_argument("existence_scan: unknown strategy " + name);
        }
        const CoverageResult r = survivors(e);
        ScanRow row;
        row.p_lo = pair.p_lo;
        row.p_hi = pair.p_hi;
        row.strategy = name;
        row.seed = seed;
        row.uncovered = r.uncovered_count;
        row.predicted = r.predicted_count;
        row.flagged = r.uncovered_count == 0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace primelab
