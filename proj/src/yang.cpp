#include "crtss/yang.hpp"

#include <map>
#include <string>

#include "crtss/error.hpp"

namespace crtss::yang {

namespace {

std::vector<std::uint64_t> draw(Rng& rng, const PrimeField& field, std::size_t count) {
  std::vector<std::uint64_t> out(count);
  for (auto& c : out) c = rng.uniform(field.modulus());
  return out;
}

std::map<std::size_t, const YangShare*> index_shares(const YangPublic& pub,
                                                     std::span<const YangShare> shares) {
  const std::size_t n = pub.structure.participant_count();
  std::map<std::size_t, const YangShare*> by_owner;
  for (const auto& share : shares) {
    if (share.participant < 1 || share.participant > n) {
      throw Error(Errc::invalid_argument, "participant " + std::to_string(share.participant) +
                                              " out of range");
    }
    if (share.coeffs.size() != pub.params.degree(share.participant)) {
      throw Error(Errc::invalid_argument,
                  "share " + std::to_string(share.participant) + " has the wrong length");
    }
    for (auto c : share.coeffs) {
      if (c >= pub.params.field.modulus()) {
        throw Error(Errc::invalid_argument, "share coefficient not below p");
      }
    }
    auto [it, inserted] = by_owner.emplace(share.participant, &share);
    if (!inserted && !(*it->second == share)) {
      throw Error(Errc::inconsistent_shares, "two different shares for participant " +
                                                 std::to_string(share.participant));
    }
  }
  return by_owner;
}

}  // namespace

void check_config(const AccessStructure& structure, const PublicParams& params) {
  if (structure.level_count() != 2) {
    throw Error(Errc::invalid_params, "the two-level scheme needs exactly two levels");
  }
  if (auto report = validate_params(structure, params); !report.ok()) {
    throw Error(Errc::invalid_params, report.summary());
  }
}

YangDealing yang_deal(const AccessStructure& structure, const PublicParams& params,
                      const Secret& secret, Rng& rng, YangMasters* masters) {
  check_config(structure, params);
  check_secret(params, secret);
  const auto& field = params.field;
  const Poly s(field, secret.coeffs);

  std::vector<Poly> f;
  for (std::size_t l = 1; l <= 2; ++l) {
    const std::size_t bound = params.leading_degree_sum(structure.threshold(l));
    Poly alpha(field, draw(rng, field, bound - params.d0));
    f.push_back(s + alpha.shifted(params.d0));
  }

  YangDealing dealing{{}, {structure, params, {}}};
  const std::size_t n1 = structure.level_sizes[0];
  for (std::size_t i = 1; i <= structure.participant_count(); ++i) {
    const Poly& mi = params.moduli[i - 1];
    Poly c = f[i <= n1 ? 0 : 1] % mi;
    if (i <= n1) dealing.pub.masks.emplace(i, (f[1] - c) % mi);
    dealing.shares.push_back({i, c.to_vector(params.degree(i))});
  }
  if (masters) *masters = {f[0], f[1]};
  return dealing;
}

Secret yang_reconstruct(const YangPublic& pub, std::span<const YangShare> shares) {
  auto by_owner = index_shares(pub, shares);
  std::vector<std::size_t> owners;
  for (const auto& [i, _] : by_owner) owners.push_back(i);
  const auto level = min_authorized_level(pub.structure, owners);
  if (!level) throw Error(Errc::unauthorized_subset, "coalition does not meet any threshold");

  const auto& field = pub.params.field;
  const std::size_t n1 = pub.structure.level_sizes[0];
  const std::size_t bound = pub.structure.prefix_size(*level);
  std::vector<Poly> residues, moduli;
  for (const auto& [i, share] : by_owner) {
    if (i > bound) continue;
    Poly c(field, share->coeffs);
    if (*level == 2 && i <= n1) c = c + pub.masks.at(i);
    residues.push_back(std::move(c));
    moduli.push_back(pub.params.moduli[i - 1]);
  }
  const Poly f = crt_combine(residues, moduli);
  return Secret{f.truncated(pub.params.d0).to_vector(pub.params.d0)};
}

AttackTrace yang_attack_trace(const YangPublic& pub, std::span<const YangShare> coalition) {
  const auto& s = pub.structure;
  const auto& params = pub.params;
  const std::size_t n1 = s.level_sizes.at(0);
  const std::size_t t1 = s.threshold(1), t2 = s.threshold(2);
  if (n1 < t2) {
    throw Error(Errc::attack_not_applicable,
                "n_1 = " + std::to_string(n1) + " < t_2 = " + std::to_string(t2) +
                    ": the masks do not determine f_2 - f_1");
  }
  auto by_owner = index_shares(pub, coalition);
  if (by_owner.empty()) throw Error(Errc::attack_not_applicable, "empty coalition");
  std::size_t degree_sum = 0;
  for (const auto& [i, _] : by_owner) {
    if (i <= n1) {
      throw Error(Errc::attack_not_applicable,
                  "participant " + std::to_string(i) + " is not in level 2");
    }
    degree_sum += params.degree(i);
  }
  const std::size_t f1_bound = params.leading_degree_sum(t1);
  if (degree_sum < f1_bound) {
    throw Error(Errc::attack_not_applicable,
                "coalition degree " + std::to_string(degree_sum) + " < " +
                    std::to_string(f1_bound) + " needed to pin down f_1");
  }

  // Step 1: w_i = (f_2 - f_1) mod m_i for every level-1 participant.
  std::vector<Poly> masks, mask_moduli;
  for (std::size_t i = 1; i <= n1; ++i) {
    auto it = pub.masks.find(i);
    if (it == pub.masks.end()) {
      throw Error(Errc::missing_bulletin_entry, "mask " + std::to_string(i) + " missing");
    }
    masks.push_back(it->second);
    mask_moduli.push_back(params.moduli[i - 1]);
  }
  Poly difference = crt_combine(masks, mask_moduli);

  // Step 2: c_i - (f_2 - f_1) = f_1 mod m_i for each coalition member.
  std::vector<Poly> residues, moduli;
  for (const auto& [i, share] : by_owner) {
    const Poly& mi = params.moduli[i - 1];
    residues.push_back((Poly(params.field, share->coeffs) - difference % mi) % mi);
    moduli.push_back(mi);
  }
  Poly f1 = crt_combine(residues, moduli);

  // Step 3
  Secret secret{f1.truncated(params.d0).to_vector(params.d0)};
  return {std::move(difference), std::move(f1), std::move(secret)};
}

Secret yang_attack(const YangPublic& pub, std::span<const YangShare> coalition) {
  return yang_attack_trace(pub, coalition).secret;
}

}  // namespace crtss::yang
