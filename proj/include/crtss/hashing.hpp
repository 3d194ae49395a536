#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crtss/field.hpp"
#include "crtss/params.hpp"
#include "crtss/poly.hpp"

namespace crtss {

/// The level-indexed one-way functions h_1..h_m, each mapping a field element
/// to floor(log2 p) bits, and their coefficient-wise lift to polynomials.
///
/// crypto: SHA-256 over "crtss/h" || be32(level) || be(x, byte_width(p)),
///         truncated to the leading floor(log2 p) bits.
/// table:  a seeded pseudorandom table keyed by (seed, level, x). Not one-way;
///         meant for exhaustive analysis where preimages must be enumerable.
///         For p <= 2^20 the tables are materialized, and a level whose table
///         equals an earlier level's is re-keyed until it differs.
class HashFamily {
 public:
  HashFamily(HashSpec spec, PrimeField field, std::size_t levels);

  const HashSpec& spec() const noexcept { return spec_; }
  const PrimeField& field() const noexcept { return field_; }
  std::size_t levels() const noexcept { return levels_; }
  unsigned output_bits() const noexcept { return bits_; }

  /// Throws Error(invalid_argument) for level outside [1, levels], or when the
  /// table backend cannot make `levels` distinct functions.
  std::uint64_t h(std::size_t level, std::uint64_t input) const;

  /// sum_j h(level, coeffs[j]) x^j. Throws for an empty vector.
  Poly hash_poly(std::size_t level, std::span<const std::uint64_t> coeffs) const;

 private:
  HashSpec spec_;
  PrimeField field_;
  std::size_t levels_;
  unsigned bits_;
  std::vector<std::uint64_t> level_keys_;            // table backend
  std::vector<std::vector<std::uint64_t>> tables_;   // materialized, small p only
};

}  // namespace crtss
