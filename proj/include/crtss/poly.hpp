#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "crtss/field.hpp"

namespace crtss {

/// A polynomial over F_p, coefficients ascending by power. Always normalized:
/// the leading stored coefficient is nonzero and the zero polynomial has no
/// coefficients (degree -1).
class Poly {
 public:
  explicit Poly(PrimeField field) : field_(field) {}
  /// Coefficients are reduced mod p and trailing zeros dropped.
  Poly(PrimeField field, std::vector<std::uint64_t> coeffs);

  static Poly constant(PrimeField field, std::uint64_t c);
  /// c * x^k
  static Poly monomial(PrimeField field, std::uint64_t c, std::size_t k);

  const PrimeField& field() const noexcept { return field_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_one() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  std::span<const std::uint64_t> coeffs() const noexcept { return coeffs_; }
  std::uint64_t coeff(std::size_t j) const noexcept {
    return j < coeffs_.size() ? coeffs_[j] : 0;
  }
  std::uint64_t leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }

  /// Fixed-length coefficient vector; throws if degree >= length.
  std::vector<std::uint64_t> to_vector(std::size_t length) const;

  std::uint64_t evaluate(std::uint64_t x) const noexcept;
  Poly monic() const;
  /// this mod x^k
  Poly truncated(std::size_t k) const;
  /// this * x^k
  Poly shifted(std::size_t k) const;

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void normalize() noexcept;

  PrimeField field_;
  std::vector<std::uint64_t> coeffs_;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(std::uint64_t c, const Poly& a);

struct DivMod {
  Poly quotient;
  Poly remainder;
};

/// a = q*b + r with deg r < deg b. Throws Error(division_by_zero) for b == 0.
DivMod divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);

struct Bezout {
  Poly gcd;  // monic
  Poly u;
  Poly v;
};

/// u*a + v*b = gcd(a, b). Throws Error(invalid_argument) when both are zero.
Bezout xgcd(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);

/// b with deg b < deg m and a*b = 1 (mod m). Throws Error(not_coprime).
Poly inverse_mod(const Poly& a, const Poly& m);

/// base^exp mod m, by repeated squaring.
Poly pow_mod(const Poly& base, std::uint64_t exp, const Poly& m);

/// The unique y with deg y < sum(deg m_i) and y = residues[i] (mod moduli[i]).
/// Throws Error(not_pairwise_coprime) or Error(invalid_argument).
Poly crt_combine(std::span<const Poly> residues, std::span<const Poly> moduli);

/// Throws Error(invalid_argument) if any input is zero.
bool is_pairwise_coprime(std::span<const Poly> polys);

std::ostream& operator<<(std::ostream& os, const Poly& f);

}  // namespace crtss
