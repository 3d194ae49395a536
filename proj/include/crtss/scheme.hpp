#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crtss/hashing.hpp"
#include "crtss/params.hpp"
#include "crtss/poly.hpp"
#include "crtss/rng.hpp"

namespace crtss {

/// s(x) as a fixed-length vector of d0 coefficients (trailing zeros allowed).
struct Secret {
  std::vector<std::uint64_t> coeffs;

  friend bool operator==(const Secret&, const Secret&) = default;
};

struct Share {
  std::size_t participant = 0;
  std::size_t level = 0;
  std::vector<std::uint64_t> coeffs;  // exactly d_i entries

  friend bool operator==(const Share&, const Share&) = default;
};

/// Published masks w_i^{(l)}, keyed by (level, participant).
class Bulletin {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  void set(std::size_t level, std::size_t participant, Poly w);
  const Poly* find(std::size_t level, std::size_t participant) const;
  std::size_t size() const noexcept { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Bulletin&, const Bulletin&) = default;

 private:
  std::map<Key, Poly> entries_;
};

/// The exact (level, participant) index set a dealer publishes: levels
/// 1..m-1 for participants in the first N_l, plus level m for the first
/// N_{m-1}.
std::vector<Bulletin::Key> bulletin_keys(const AccessStructure& structure);

struct Dealing {
  std::vector<Share> shares;  // indexed by participant - 1
  Bulletin bulletin;
};

/// Throws Error(invalid_params) with the violation list, or
/// Error(invalid_argument) for a secret of the wrong length or range.
Dealing deal(const AccessStructure& structure, const PublicParams& params,
             const HashFamily& family, const Secret& secret, Rng& rng);

/// The residue of f_l mod m_i that participant i contributes at level l:
/// H_l(s_i) + w_i^{(l)} for masked shares, the raw share for a last-level
/// participant at l = m. Throws Error(missing_bulletin_entry).
Poly unmask_share(const AccessStructure& structure, const PublicParams& params,
                  const HashFamily& family, const Bulletin& bulletin,
                  const Share& share, std::size_t level);

/// Recovers the secret from the smallest authorized level, using every
/// coalition member that belongs to it.
/// Throws Error(unauthorized_subset) or Error(inconsistent_shares).
Secret reconstruct(const AccessStructure& structure, const PublicParams& params,
                   const HashFamily& family, const Bulletin& bulletin,
                   std::span<const Share> shares);

/// Checks a secret against d0 and p.
void check_secret(const PublicParams& params, const Secret& secret);

namespace detail {

/// Dealer internals, kept out of the public surface.
struct MasterPolys {
  std::vector<Poly> alpha;  // alpha_1..alpha_m
  std::vector<Poly> f;      // f_1..f_m
};

std::pair<Dealing, MasterPolys> deal_with_masters(const AccessStructure& structure,
                                                  const PublicParams& params,
                                                  const HashFamily& family,
                                                  const Secret& secret, Rng& rng);

}  // namespace detail

}  // namespace crtss
