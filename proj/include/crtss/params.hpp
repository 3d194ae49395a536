#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crtss/field.hpp"
#include "crtss/poly.hpp"
#include "crtss/rng.hpp"

namespace crtss {

/// Level sizes n_1..n_m and thresholds t_1..t_m. Participants are indexed
/// 1..n level by level, so level l owns indices (N_{l-1}, N_l].
struct AccessStructure {
  std::vector<std::size_t> level_sizes;
  std::vector<std::size_t> thresholds;

  std::size_t level_count() const noexcept { return level_sizes.size(); }
  std::size_t participant_count() const noexcept;
  /// N_l; prefix_size(0) == 0.
  std::size_t prefix_size(std::size_t level) const;
  std::size_t threshold(std::size_t level) const { return thresholds.at(level - 1); }
  /// Level (1-based) of participant i (1-based).
  std::size_t level_of(std::size_t participant) const;
};

enum class HashBackend { crypto, table };

struct HashSpec {
  HashBackend backend = HashBackend::crypto;
  std::uint64_t table_seed = 0;

  friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

struct PublicParams {
  PrimeField field;
  std::size_t d0 = 1;
  std::vector<Poly> moduli;
  HashSpec hash;

  std::vector<std::size_t> degrees() const;
  std::size_t degree(std::size_t participant) const;
  /// d_1 + ... + d_count, the degree bound of f_l when count = t_l.
  std::size_t leading_degree_sum(std::size_t count) const;
};

enum class Violation {
  no_levels,
  level_size_mismatch,
  empty_level,
  zero_threshold,
  thresholds_not_increasing,
  threshold_exceeds_level,
  secret_degree_zero,
  modulus_count,
  modulus_degree,
  modulus_divisible_by_x,
  degrees_not_ascending,
  degree_budget,
  moduli_not_coprime,
};

const char* to_string(Violation v) noexcept;

struct ValidationReport {
  struct Entry {
    Violation kind;
    std::string detail;
  };
  std::vector<Entry> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation v) const noexcept;
  std::string summary() const;
};

ValidationReport validate_structure(const AccessStructure& structure);

/// Checks the degree profile alone: nondecreasing from d0 and the per-level
/// degree budget d0 + (sum of the t_l - 1 largest) <= (sum of the t_l smallest).
ValidationReport validate_degree_profile(const AccessStructure& structure,
                                         std::size_t d0,
                                         std::span<const std::size_t> degrees);

/// Every violated condition, not just the first. Empty iff usable for dealing.
ValidationReport validate_params(const AccessStructure& structure,
                                 const PublicParams& params);

/// Ben-Or irreducibility test for a polynomial of degree >= 1.
bool is_irreducible(const Poly& f);

/// Number of monic irreducible polynomials of the given degree over F_p,
/// saturating at UINT64_MAX.
std::uint64_t count_monic_irreducibles(const PrimeField& field, std::size_t degree);

/// n distinct monic irreducibles (none equal to x) with the requested degrees,
/// in profile order. Throws Error(insufficient_irreducibles).
std::vector<Poly> generate_moduli(const PrimeField& field,
                                  std::span<const std::size_t> degree_profile,
                                  Rng& rng);

/// Subsets are 1-based participant indices; duplicates are ignored.
bool is_authorized(const AccessStructure& structure,
                   std::span<const std::size_t> subset);
std::optional<std::size_t> min_authorized_level(
    const AccessStructure& structure, std::span<const std::size_t> subset);

struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// d0 / max d_i, reduced.
Ratio information_rate(const AccessStructure& structure, const PublicParams& params);

}  // namespace crtss
