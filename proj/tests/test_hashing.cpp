#include <doctest.h>

#include <vector>

#include "crtss/error.hpp"
#include "crtss/hashing.hpp"
#include "crtss/rng.hpp"

using namespace crtss;

namespace {

HashFamily table_family(std::uint64_t p, std::uint64_t seed, std::size_t levels = 2) {
  return HashFamily(HashSpec{HashBackend::table, seed}, PrimeField(p), levels);
}

}  // namespace

TEST_CASE("table backend matches the pinned p=3 fixture") {
  const auto fam = table_family(3, 2024);
  CHECK(fam.output_bits() == 1);
  const std::vector<std::vector<std::uint64_t>> expected{{0, 0, 1}, {0, 1, 0}};
  for (std::size_t level = 1; level <= 2; ++level) {
    for (std::uint64_t x = 0; x < 3; ++x) CHECK(fam.h(level, x) == expected[level - 1][x]);
  }
  const std::vector<std::uint64_t> share{2, 0, 1};
  CHECK(fam.hash_poly(1, share) == Poly(PrimeField(3), {1, 0, 0}));
  CHECK(fam.hash_poly(2, share) == Poly(PrimeField(3), {0, 0, 1}));
}

TEST_CASE("table backend matches reference values at p=11") {
  const auto fam = table_family(11, 7, 1);
  const std::vector<std::uint64_t> expected{3, 6, 0, 6, 4, 7, 2, 0, 2, 5, 1};
  for (std::uint64_t x = 0; x < 11; ++x) CHECK(fam.h(1, x) == expected[x]);
}

TEST_CASE("crypto backend matches reference SHA-256 values") {
  const HashFamily small(HashSpec{}, PrimeField(11), 2);
  const std::vector<std::uint64_t> expected{6, 4, 1, 1, 6, 7, 5, 3, 7, 4, 4};
  for (std::uint64_t x = 0; x < 11; ++x) CHECK(small.h(1, x) == expected[x]);

  const HashFamily big(HashSpec{}, PrimeField(2147483647), 2);
  CHECK(big.output_bits() == 30);
  CHECK(big.h(2, 0) == 21333296);
  CHECK(big.h(2, 1) == 762085052);
  CHECK(big.h(2, 2147483646) == 41801889);
}

TEST_CASE("outputs stay below 2^floor(log2 p)") {
  Rng rng(1);
  const PrimeField f(2147483647);
  const HashFamily crypto(HashSpec{}, f, 3);
  for (int trial = 0; trial < 1'000'000; ++trial) {
    const auto level = 1 + rng.uniform(3);
    REQUIRE(crypto.h(level, rng.uniform(f.modulus())) < (1ULL << 30));
  }
  for (std::uint64_t p : {2, 3, 5, 7, 11, 101}) {
    const auto fam = table_family(p, p * 13, 3);
    const auto bound = 1ULL << fam.output_bits();
    for (std::size_t level = 1; level <= 3; ++level) {
      for (std::uint64_t x = 0; x < p; ++x) {
        REQUIRE(fam.h(level, x) < bound);
        REQUIRE(fam.h(level, x) < p);
      }
    }
  }
}

TEST_CASE("determinism and level separation") {
  const HashFamily fam(HashSpec{}, PrimeField(101), 3);
  CHECK(fam.h(2, 17) == fam.h(2, 17));
  CHECK(table_family(101, 5).h(1, 9) == table_family(101, 5).h(1, 9));
  bool differs = false;
  for (std::uint64_t x = 0; x < 101 && !differs; ++x) differs = fam.h(1, x) != fam.h(2, x);
  CHECK(differs);
  CHECK(fam.h(1, 101 + 4) == fam.h(1, 4));
}

TEST_CASE("hash_poly projects coefficient-wise") {
  const HashFamily fam(HashSpec{}, PrimeField(101), 2);
  const std::vector<std::uint64_t> single{42};
  CHECK(fam.hash_poly(1, single) == Poly::constant(PrimeField(101), fam.h(1, 42)));
  const std::vector<std::uint64_t> zeros(3, 0);
  const auto z = fam.hash_poly(2, zeros);
  for (std::size_t j = 0; j < 3; ++j) CHECK(z.coeff(j) == fam.h(2, 0));
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint64_t> v(1 + rng.uniform(4));
    for (auto& c : v) c = rng.uniform(101);
    const auto hp = fam.hash_poly(1, v);
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(hp.coeff(j) == fam.h(1, v[j]));
  }
}

TEST_CASE("invalid uses are rejected") {
  const HashFamily fam(HashSpec{}, PrimeField(101), 2);
  CHECK_THROWS_AS(fam.h(0, 1), Error);
  CHECK_THROWS_AS(fam.h(3, 1), Error);
  CHECK_THROWS_AS(fam.hash_poly(1, std::vector<std::uint64_t>{}), Error);
  CHECK_THROWS_AS(HashFamily(HashSpec{}, PrimeField(101), 0), Error);
}

TEST_CASE("table levels are distinct functions") {
  for (std::uint64_t p : {2, 3, 5}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto fam = table_family(p, seed, 4);
      for (std::size_t a = 1; a <= 4; ++a) {
        for (std::size_t b = a + 1; b <= 4; ++b) {
          bool differs = false;
          for (std::uint64_t x = 0; x < p; ++x) differs = differs || fam.h(a, x) != fam.h(b, x);
          REQUIRE(differs);
        }
      }
    }
  }
  // F_2 with one output bit admits only four functions.
  CHECK_THROWS_AS(table_family(2, 1, 5), Error);
}
