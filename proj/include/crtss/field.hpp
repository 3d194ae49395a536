#pragma once

#include <cstdint>

namespace crtss {

bool is_prime(std::uint64_t n) noexcept;

/// Arithmetic in F_p for a prime p that fits in 64 bits. Elements are plain
/// integers in [0, p); products go through 128-bit intermediates.
class PrimeField {
 public:
  /// Throws Error(invalid_argument) unless p is prime.
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const noexcept { return p_; }

  std::uint64_t reduce(std::uint64_t a) const noexcept { return a % p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    if (s < a || s >= p_) s -= p_;
    return s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + (p_ - b);
  }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const noexcept;
  /// Throws Error(division_by_zero) for a == 0.
  std::uint64_t inv(std::uint64_t a) const;

  /// floor(log2 p), the width of a hash output that always lands in [0, p).
  unsigned floor_log2() const noexcept;
  /// Bytes needed to encode any element big-endian.
  unsigned byte_width() const noexcept;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

}  // namespace crtss
