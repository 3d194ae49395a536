#include "crtss/poly.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "crtss/error.hpp"

namespace crtss {

namespace {

void require_same_field(const Poly& a, const Poly& b) {
  if (!(a.field() == b.field())) {
    throw Error(Errc::field_mismatch,
                "polynomials over F_" + std::to_string(a.field().modulus()) +
                    " and F_" + std::to_string(b.field().modulus()));
  }
}

}  // namespace

Poly::Poly(PrimeField field, std::vector<std::uint64_t> coeffs)
    : field_(field), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c = field_.reduce(c);
  normalize();
}

Poly Poly::constant(PrimeField field, std::uint64_t c) {
  return Poly(field, {c});
}

Poly Poly::monomial(PrimeField field, std::uint64_t c, std::size_t k) {
  std::vector<std::uint64_t> coeffs(k + 1, 0);
  coeffs[k] = c;
  return Poly(field, std::move(coeffs));
}

void Poly::normalize() noexcept {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::vector<std::uint64_t> Poly::to_vector(std::size_t length) const {
  if (coeffs_.size() > length) {
    throw Error(Errc::invalid_argument, "degree " + std::to_string(degree()) +
                                            " does not fit " + std::to_string(length) +
                                            " coefficients");
  }
  std::vector<std::uint64_t> out(coeffs_);
  out.resize(length, 0);
  return out;
}

std::uint64_t Poly::evaluate(std::uint64_t x) const noexcept {
  std::uint64_t acc = 0;
  x = field_.reduce(x);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = field_.add(field_.mul(acc, x), *it);
  }
  return acc;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return field_.inv(leading()) * *this;
}

Poly Poly::truncated(std::size_t k) const {
  if (coeffs_.size() <= k) return *this;
  return Poly(field_, std::vector<std::uint64_t>(coeffs_.begin(), coeffs_.begin() + k));
}

Poly Poly::shifted(std::size_t k) const {
  if (is_zero()) return *this;
  std::vector<std::uint64_t> out(k, 0);
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return Poly(field_, std::move(out));
}

Poly operator+(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const auto& f = a.field();
  std::vector<std::uint64_t> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = f.add(a.coeff(j), b.coeff(j));
  return Poly(f, std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const auto& f = a.field();
  std::vector<std::uint64_t> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = f.sub(a.coeff(j), b.coeff(j));
  return Poly(f, std::move(out));
}

Poly operator-(const Poly& a) {
  const auto& f = a.field();
  std::vector<std::uint64_t> out(a.coeffs().begin(), a.coeffs().end());
  for (auto& c : out) c = f.neg(c);
  return Poly(f, std::move(out));
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const auto& f = a.field();
  if (a.is_zero() || b.is_zero()) return Poly(f);
  auto ac = a.coeffs();
  auto bc = b.coeffs();
  std::vector<std::uint64_t> out(ac.size() + bc.size() - 1, 0);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i] == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) {
      out[i + j] = f.add(out[i + j], f.mul(ac[i], bc[j]));
    }
  }
  return Poly(f, std::move(out));
}

Poly operator*(std::uint64_t c, const Poly& a) {
  const auto& f = a.field();
  c = f.reduce(c);
  std::vector<std::uint64_t> out(a.coeffs().begin(), a.coeffs().end());
  for (auto& x : out) x = f.mul(c, x);
  return Poly(f, std::move(out));
}

DivMod divmod(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const auto& f = a.field();
  if (b.is_zero()) throw Error(Errc::division_by_zero, "division by the zero polynomial");
  if (a.degree() < b.degree()) return {Poly(f), a};

  std::vector<std::uint64_t> rem(a.coeffs().begin(), a.coeffs().end());
  auto bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  const std::uint64_t lead_inv = f.inv(bc.back());
  std::vector<std::uint64_t> quot(rem.size() - db, 0);

  for (std::size_t k = quot.size(); k-- > 0;) {
    const std::uint64_t q = f.mul(rem[k + db], lead_inv);
    quot[k] = q;
    if (q == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) {
      rem[k + j] = f.sub(rem[k + j], f.mul(q, bc[j]));
    }
  }
  rem.resize(db);
  return {Poly(f, std::move(quot)), Poly(f, std::move(rem))};
}

Poly operator%(const Poly& a, const Poly& b) {
  return divmod(a, b).remainder;
}

Poly operator/(const Poly& a, const Poly& b) {
  return divmod(a, b).quotient;
}

Bezout xgcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const auto& f = a.field();
  if (a.is_zero() && b.is_zero()) {
    throw Error(Errc::invalid_argument, "gcd of two zero polynomials");
  }
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(f, 1), s1(f);
  Poly t0(f), t1 = Poly::constant(f, 1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  const std::uint64_t scale = f.inv(r0.leading());
  return {scale * r0, scale * s0, scale * t0};
}

Poly gcd(const Poly& a, const Poly& b) {
  return xgcd(a, b).gcd;
}

Poly inverse_mod(const Poly& a, const Poly& m) {
  require_same_field(a, m);
  if (m.degree() < 1) throw Error(Errc::invalid_argument, "modulus must have degree >= 1");
  Poly r = a % m;
  if (r.is_zero()) throw Error(Errc::not_coprime, "zero has no inverse");
  auto bz = xgcd(r, m);
  if (!bz.gcd.is_one()) throw Error(Errc::not_coprime, "gcd is not a unit");
  return bz.u % m;
}

Poly pow_mod(const Poly& base, std::uint64_t exp, const Poly& m) {
  const auto& f = base.field();
  Poly result = Poly::constant(f, 1) % m;
  Poly b = base % m;
  while (exp) {
    if (exp & 1) result = (result * b) % m;
    exp >>= 1;
    if (exp) b = (b * b) % m;
  }
  return result;
}

Poly crt_combine(std::span<const Poly> residues, std::span<const Poly> moduli) {
  if (moduli.empty() || residues.size() != moduli.size()) {
    throw Error(Errc::invalid_argument, "CRT needs one residue per modulus and at least one modulus");
  }
  const auto& f = moduli.front().field();
  Poly product = Poly::constant(f, 1);
  for (const auto& m : moduli) {
    if (m.degree() < 1) throw Error(Errc::invalid_argument, "CRT modulus must have degree >= 1");
    product = product * m;
  }
  Poly y(f);
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    require_same_field(residues[i], moduli[i]);
    Poly cofactor = product / moduli[i];
    Poly lambda(f);
    try {
      lambda = inverse_mod(cofactor, moduli[i]);
    } catch (const Error& e) {
      if (e.code() != Errc::not_coprime) throw;
      throw Error(Errc::not_pairwise_coprime,
                  "modulus " + std::to_string(i) + " shares a factor with the others");
    }
    // Reducing lambda * y_i mod m_i first keeps every term below deg M.
    y = y + ((lambda * residues[i]) % moduli[i]) * cofactor;
  }
  return y;
}

bool is_pairwise_coprime(std::span<const Poly> polys) {
  for (const auto& p : polys) {
    if (p.is_zero()) throw Error(Errc::invalid_argument, "zero polynomial in coprimality check");
  }
  for (std::size_t i = 0; i < polys.size(); ++i) {
    for (std::size_t j = i + 1; j < polys.size(); ++j) {
      if (!gcd(polys[i], polys[j]).is_one()) return false;
    }
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Poly& f) {
  if (f.is_zero()) return os << "0";
  bool first = true;
  for (std::size_t j = f.coeffs().size(); j-- > 0;) {
    const auto c = f.coeffs()[j];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (j == 0 || c != 1) os << c;
    if (j >= 1) os << "x";
    if (j >= 2) os << "^" << j;
  }
  return os;
}

}  // namespace crtss
