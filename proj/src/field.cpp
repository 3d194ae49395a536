#include "crtss/field.hpp"

#include <bit>
#include <string>

#include "crtss/error.hpp"
#include "crtss/rng.hpp"

namespace crtss {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::field_mismatch: return "field mismatch";
    case Errc::division_by_zero: return "division by zero";
    case Errc::not_coprime: return "not coprime";
    case Errc::not_pairwise_coprime: return "moduli not pairwise coprime";
    case Errc::insufficient_irreducibles: return "insufficient irreducibles";
    case Errc::invalid_params: return "invalid parameters";
    case Errc::unauthorized_subset: return "unauthorized subset";
    case Errc::inconsistent_shares: return "inconsistent shares";
    case Errc::missing_bulletin_entry: return "missing bulletin entry";
    case Errc::attack_not_applicable: return "attack not applicable";
    case Errc::budget_exceeded: return "budget exceeded";
    case Errc::no_solution: return "no solution";
    case Errc::parse_error: return "parse error";
  }
  return "unknown";
}

BudgetExceeded::BudgetExceeded(std::uint64_t states, std::uint64_t budget)
    : Error(Errc::budget_exceeded, "enumeration needs " + std::to_string(states) +
                                       " states, budget is " + std::to_string(budget)),
      states_(states),
      budget_(budget) {}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

// Deterministic Miller-Rabin; these bases cover every 64-bit integer.
bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (!is_prime(p)) {
    throw Error(Errc::invalid_argument, std::to_string(p) + " is not prime");
  }
}

std::uint64_t PrimeField::pow(std::uint64_t base, std::uint64_t exp) const noexcept {
  return powmod(base, exp, p_);
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  if (a % p_ == 0) throw Error(Errc::division_by_zero, "inverse of zero");
  return powmod(a, p_ - 2, p_);
}

unsigned PrimeField::floor_log2() const noexcept {
  return static_cast<unsigned>(std::bit_width(p_)) - 1;
}

unsigned PrimeField::byte_width() const noexcept {
  return (static_cast<unsigned>(std::bit_width(p_)) + 7) / 8;
}

Rng Rng::from_os_entropy() {
  std::random_device rd;
  std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return Rng(seed);
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::invalid_argument, "uniform bound must be positive");
  // Rejection below 2^64 mod bound keeps the draw exactly uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace crtss
