#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "primelab/sieve.hpp"

using namespace primelab;

TEST_CASE("primes_up_to matches the trial division oracle") {
  CHECK(primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(primes_up_to(2) == std::vector<std::uint64_t>{2});
  CHECK(primes_up_to(100).size() == 25);

  CHECK(primes_up_to(100'000) == oracles::trial_division_primes(100'000));

  // boundary behavior around small limits and segment edges
  for (std::uint64_t limit : {2ull, 3ull, 4ull, 63ull, 64ull, 65ull, 97ull,
                              1024ull, 1031ull}) {
    CHECK(primes_up_to(limit) == oracles::trial_division_primes(limit));
  }
}

TEST_CASE("primes_up_to rejects empty ranges") {
  CHECK_THROWS_AS(primes_up_to(1), std::invalid_argument);
  CHECK_THROWS_AS(primes_up_to(0), std::invalid_argument);
}

TEST_CASE("sieve config validation") {
  CHECK_THROWS_AS(validate(SieveConfig{1, 1024}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SieveConfig{1000, 32}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SieveConfig{1000, 2048}), std::invalid_argument);
  CHECK_NOTHROW(validate(SieveConfig{1000, 128}));
}

TEST_CASE("segment size does not change the stream") {
  const auto reference = primes_up_to(100'000);
  for (std::uint64_t seg : {64ull, 100ull, 127ull, 4096ull, 65536ull}) {
    PrimeStream stream(SieveConfig{100'000, seg});
    std::vector<std::uint64_t> got;
    stream.for_each([&](std::uint64_t p) { got.push_back(p); });
    CHECK(got == reference);
  }
}

TEST_CASE("prime_count") {
  CHECK(prime_count(1) == 0);
  CHECK(prime_count(100) == 25);
  CHECK(prime_count(1'000'000) == 78498);
  CHECK(prime_count(1'000'000) == oracles::monolithic_sieve_count(1'000'000));
}

TEST_CASE("gap_pairs examples") {
  const std::vector<GapPair> twin = gap_pairs(50, 2);
  REQUIRE(twin.size() == 6);
  const std::uint64_t expected_lo[] = {3, 5, 11, 17, 29, 41};
  for (std::size_t i = 0; i < twin.size(); ++i) {
    CHECK(twin[i].p_lo == expected_lo[i]);
    CHECK(twin[i].p_hi == expected_lo[i] + 2);
    CHECK(twin[i].h == 2);
  }

  const std::vector<GapPair> cousins = gap_pairs(50, 4);
  REQUIRE(cousins.size() == 5);
  const std::uint64_t cousin_lo[] = {7, 13, 19, 37, 43};
  for (std::size_t i = 0; i < cousins.size(); ++i) {
    CHECK(cousins[i].p_lo == cousin_lo[i]);
  }

  CHECK(gap_pairs(10, 100).empty());
  CHECK_THROWS_AS(gap_pairs(50, 0), std::invalid_argument);
  CHECK_THROWS_AS(gap_pairs(50, -2), std::invalid_argument);

  // odd gaps: only (2, 3) is possible
  const auto h1 = gap_pairs(50, 1);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].p_lo == 2);
  CHECK(gap_pairs(50, 3).empty());
}

TEST_CASE("gap_pairs entries are adjacent in the full stream") {
  const auto primes = primes_up_to(10'000);
  for (std::int64_t h : {2, 4, 6}) {
    for (const auto& g : gap_pairs(10'000, h)) {
      const auto it = std::lower_bound(primes.begin(), primes.end(), g.p_lo);
      REQUIRE(it != primes.end());
      CHECK(*it == g.p_lo);
      REQUIRE(std::next(it) != primes.end());
      CHECK(*std::next(it) == g.p_hi);
      CHECK(g.p_hi - g.p_lo == g.h);
    }
  }
}
