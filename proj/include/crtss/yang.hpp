#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "crtss/params.hpp"
#include "crtss/poly.hpp"
#include "crtss/rng.hpp"
#include "crtss/scheme.hpp"

namespace crtss::yang {

// The two-level CRT scheme in which level-1 shares double as level-2 shares
// through published masks w_i = (f_2 - c_i) mod m_i. Kept to demonstrate
// that the masks leak f_2 - f_1.

struct YangShare {
  std::size_t participant = 0;
  std::vector<std::uint64_t> coeffs;  // c_i, d_i entries

  friend bool operator==(const YangShare&, const YangShare&) = default;
};

struct YangPublic {
  AccessStructure structure;  // exactly two levels
  PublicParams params;
  std::map<std::size_t, Poly> masks;  // i in [1, n_1]
};

struct YangDealing {
  std::vector<YangShare> shares;
  YangPublic pub;
};

struct YangMasters {
  Poly f1;
  Poly f2;
};

/// Throws Error(invalid_params) unless the structure has two levels and the
/// parameters pass validate_params.
void check_config(const AccessStructure& structure, const PublicParams& params);

YangDealing yang_deal(const AccessStructure& structure, const PublicParams& params,
                      const Secret& secret, Rng& rng, YangMasters* masters = nullptr);

/// Honest reconstruction. Throws Error(unauthorized_subset).
Secret yang_reconstruct(const YangPublic& pub, std::span<const YangShare> shares);

struct AttackTrace {
  Poly difference;  // f_2 - f_1, from the public masks alone
  Poly f1;
  Secret secret;
};

/// Recovers the secret from public data plus the shares of a coalition lying
/// entirely inside level 2. Needs n_1 >= t_2 and enough coalition degree to
/// pin down f_1. Throws Error(attack_not_applicable).
AttackTrace yang_attack_trace(const YangPublic& pub,
                              std::span<const YangShare> coalition);
Secret yang_attack(const YangPublic& pub, std::span<const YangShare> coalition);

}  // namespace crtss::yang
