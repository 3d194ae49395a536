#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "crtss/error.hpp"
#include "crtss/field.hpp"
#include "crtss/params.hpp"
#include "crtss/poly.hpp"
#include "crtss/rng.hpp"
#include "crtss/scheme.hpp"

namespace crtss::testing {

// Every polynomial of degree < len over the field, zero first.
inline std::vector<Poly> all_polys(const PrimeField& field, std::size_t len) {
  std::vector<Poly> out;
  std::vector<std::uint64_t> digits(len, 0);
  const auto p = field.modulus();
  while (true) {
    out.emplace_back(field, digits);
    std::size_t j = 0;
    while (j < len && ++digits[j] == p) digits[j++] = 0;
    if (j == len) break;
  }
  return out;
}

inline std::vector<Poly> monic_polys(const PrimeField& field, std::size_t degree) {
  std::vector<Poly> out;
  for (const auto& low : all_polys(field, degree)) out.push_back(low + Poly::monomial(field, 1, degree));
  return out;
}

// Reference irreducibility: no monic factor of degree 1..deg/2 divides f.
inline bool irreducible_by_trial_division(const Poly& f) {
  if (f.degree() < 1) return false;
  for (std::size_t k = 1; 2 * k <= static_cast<std::size_t>(f.degree()); ++k) {
    for (const auto& g : monic_polys(f.field(), k)) {
      if ((f % g).is_zero()) return false;
    }
  }
  return true;
}

inline Poly random_poly(const PrimeField& field, std::size_t len, Rng& rng) {
  std::vector<std::uint64_t> c(len);
  for (auto& x : c) x = rng.uniform(field.modulus());
  return Poly(field, c);
}

inline std::vector<std::size_t> members_of(std::uint64_t mask, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1) out.push_back(i + 1);
  }
  return out;
}

inline PublicParams make_params(std::uint64_t p, std::size_t d0, const std::vector<std::size_t>& degrees,
                                std::uint64_t seed, HashSpec hash = {}) {
  const PrimeField field(p);
  Rng rng(seed);
  return PublicParams{field, d0, generate_moduli(field, degrees, rng), hash};
}

struct Config {
  AccessStructure structure;
  PublicParams params;
};

// A valid configuration with m in [1, max_levels], n <= max_n, d_i <= 3.
inline Config random_config(Rng& rng, std::uint64_t p, std::size_t max_levels = 3,
                            std::size_t max_n = 10) {
  const PrimeField field(p);
  while (true) {
    const std::size_t m = 1 + rng.uniform(max_levels);
    AccessStructure s;
    std::size_t t = 0, n = 0;
    for (std::size_t l = 0; l < m; ++l) {
      t += 1 + rng.uniform(2);
      const std::size_t size = t + rng.uniform(3);
      n += size;
      s.thresholds.push_back(t);
      s.level_sizes.push_back(size);
    }
    if (n > max_n) continue;
    const std::size_t d0 = 1 + rng.uniform(3);
    std::vector<std::size_t> degrees(n, d0);
    if (rng.uniform(2) == 0) {
      for (auto& d : degrees) d = d0 + rng.uniform(4 - d0);
      std::sort(degrees.begin(), degrees.end());
    }
    if (!validate_degree_profile(s, d0, degrees).ok()) degrees.assign(n, d0);
    try {
      HashSpec hash;
      if (rng.uniform(2)) hash = HashSpec{HashBackend::table, rng.next()};
      PublicParams params{field, d0, generate_moduli(field, degrees, rng), hash};
      return {s, params};
    } catch (const Error&) {
      continue;  // not enough irreducibles at this p
    }
  }
}

inline Secret random_secret(const PublicParams& params, Rng& rng) {
  Secret s;
  for (std::size_t j = 0; j < params.d0; ++j) s.coeffs.push_back(rng.uniform(params.field.modulus()));
  return s;
}

}  // namespace crtss::testing
