#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "crtss/hashing.hpp"
#include "crtss/params.hpp"
#include "crtss/poly.hpp"
#include "crtss/scheme.hpp"

namespace crtss::oracle {

// Exhaustive security auditing at toy sizes. Nothing here is meant to scale.

/// Which bulletin entries an unauthorized coalition's view is checked
/// against: only its own masks (conditions i-iv), or every published mask,
/// which requires enumerating hash preimages (conditions i-v).
enum class ViewMode { own_masks, all_masks };

const char* to_string(ViewMode mode) noexcept;
ViewMode parse_view_mode(const std::string& text);

struct EnumerationBudget {
  std::uint64_t max_states = 10'000'000;
};

/// What an unauthorized coalition sees: its own shares and the bulletin.
class CoalitionView {
 public:
  /// Throws Error(invalid_argument) if the coalition is authorized, a share
  /// is missing or duplicated, or all_masks is requested with a non-table hash.
  CoalitionView(AccessStructure structure, PublicParams params,
                std::vector<Share> coalition_shares, Bulletin bulletin,
                ViewMode mode);

  /// Convenience: the view of `coalition` on a full dealing.
  static CoalitionView observe(const AccessStructure& structure,
                               const PublicParams& params, const Dealing& dealing,
                               std::span<const std::size_t> coalition, ViewMode mode);

  const AccessStructure& structure() const noexcept { return structure_; }
  const PublicParams& params() const noexcept { return params_; }
  const HashFamily& family() const noexcept { return family_; }
  const Bulletin& bulletin() const noexcept { return bulletin_; }
  ViewMode mode() const noexcept { return mode_; }
  /// Sorted participant indices.
  const std::vector<std::size_t>& coalition() const noexcept { return members_; }
  const std::vector<Share>& shares() const noexcept { return shares_; }
  const Share* share_of(std::size_t participant) const;

 private:
  AccessStructure structure_;
  PublicParams params_;
  HashFamily family_;
  std::vector<std::size_t> members_;
  std::vector<Share> shares_;
  Bulletin bulletin_;
  ViewMode mode_;
};

/// sum_l (sum_{i<=t_l} d_i - sum_{i in B, i<=N_l} d_i - d0).
/// Throws Error(invalid_argument) if the coalition is authorized.
std::uint64_t compute_theta(const AccessStructure& structure,
                            const PublicParams& params,
                            std::span<const std::size_t> coalition);

/// Secrets are indexed by reading their coefficient vector as a base-p
/// number, constant term least significant.
std::uint64_t secret_index(const PrimeField& field, const Secret& secret);
Secret secret_at(const PrimeField& field, std::size_t d0, std::uint64_t index);
std::uint64_t secret_space_size(const PrimeField& field, std::size_t d0);

/// Number of dealer randomness tuples (s, alpha_1..alpha_m, c_1..c_{N_{m-1}}),
/// saturating at UINT64_MAX.
std::uint64_t dealer_state_count(const AccessStructure& structure,
                                 const PublicParams& params);

struct Histogram {
  std::vector<std::uint64_t> counts;  // by secret_index
  std::uint64_t states = 0;           // size of the dealer randomness space
  std::uint64_t total() const noexcept;
  bool uniform() const noexcept;
};

/// For each secret, how many dealer randomness tuples reproduce the observed
/// view. Work is split across `workers` threads (0 = hardware concurrency).
Histogram enumerate_consistent(const CoalitionView& view, EnumerationBudget budget,
                               unsigned workers = 0);

/// |Phi^{-1}(s)|: guess tuples (g_1..g_m) meeting conditions i-iv with
/// g_m = s mod x^{d0}, found by walking the free multiples of each partial
/// CRT modulus.
std::uint64_t count_preimage(const CoalitionView& view, const Secret& secret,
                             EnumerationBudget budget);
/// |F| = sum over all secrets of count_preimage.
std::uint64_t count_F(const CoalitionView& view, EnumerationBudget budget);

/// H(S) - H(S | view) in bits for a uniform secret.
double loss_entropy(const Histogram& histogram, const PrimeField& field, std::size_t d0);
double loss_entropy(const CoalitionView& view, EnumerationBudget budget);

/// Unique y with deg y < sum(deg m_i) meeting every congruence, by trying all
/// p^{sum deg} candidates. Throws Error(no_solution) when none or several
/// exist, BudgetExceeded when p^{sum deg} > max_states.
Poly crt_bruteforce(std::span<const Poly> residues, std::span<const Poly> moduli,
                    std::uint64_t max_states = 1'000'000);

/// Candidate table for one moduli set: every polynomial of degree below
/// sum(deg m_i), bucketed by its residue tuple. Lets a sweep answer many
/// residue tuples from a single enumeration.
class CrtBruteforceTable {
 public:
  CrtBruteforceTable(std::vector<Poly> moduli, std::uint64_t max_states = 1'000'000);

  /// Same contract as crt_bruteforce.
  Poly solve(std::span<const Poly> residues) const;
  std::uint64_t candidate_count() const noexcept { return candidates_; }

 private:
  std::vector<std::uint64_t> key(std::span<const Poly> residues) const;

  std::vector<Poly> moduli_;
  std::uint64_t candidates_ = 0;
  std::map<std::vector<std::uint64_t>, std::vector<Poly>> buckets_;
};

/// Integer power with overflow saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) noexcept;

}  // namespace crtss::oracle
