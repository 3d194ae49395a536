#include "crtss/scheme.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "crtss/error.hpp"

namespace crtss {

void Bulletin::set(std::size_t level, std::size_t participant, Poly w) {
  entries_.insert_or_assign(Key{level, participant}, std::move(w));
}

const Poly* Bulletin::find(std::size_t level, std::size_t participant) const {
  auto it = entries_.find(Key{level, participant});
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Bulletin::Key> bulletin_keys(const AccessStructure& structure) {
  const std::size_t m = structure.level_count();
  std::vector<Bulletin::Key> keys;
  for (std::size_t l = 1; l < m; ++l) {
    for (std::size_t i = 1; i <= structure.prefix_size(l); ++i) keys.emplace_back(l, i);
  }
  if (m >= 1) {
    for (std::size_t i = 1; i <= structure.prefix_size(m - 1); ++i) keys.emplace_back(m, i);
  }
  return keys;
}

void check_secret(const PublicParams& params, const Secret& secret) {
  if (secret.coeffs.size() != params.d0) {
    throw Error(Errc::invalid_argument, "secret has " + std::to_string(secret.coeffs.size()) +
                                            " coefficients, expected d0 = " +
                                            std::to_string(params.d0));
  }
  for (auto c : secret.coeffs) {
    if (c >= params.field.modulus()) {
      throw Error(Errc::invalid_argument, "secret coefficient " + std::to_string(c) +
                                              " is not below p");
    }
  }
}

namespace {

std::vector<std::uint64_t> draw(Rng& rng, const PrimeField& field, std::size_t count) {
  std::vector<std::uint64_t> out(count);
  for (auto& c : out) c = rng.uniform(field.modulus());
  return out;
}

void check_share(const AccessStructure& structure, const PublicParams& params,
                 const Share& share) {
  const std::size_t n = structure.participant_count();
  if (share.participant < 1 || share.participant > n) {
    throw Error(Errc::invalid_argument,
                "share for participant " + std::to_string(share.participant) + " out of range");
  }
  if (share.level != structure.level_of(share.participant)) {
    throw Error(Errc::invalid_argument, "share " + std::to_string(share.participant) +
                                            " claims level " + std::to_string(share.level));
  }
  if (share.coeffs.size() != params.degree(share.participant)) {
    throw Error(Errc::invalid_argument, "share " + std::to_string(share.participant) + " has " +
                                            std::to_string(share.coeffs.size()) +
                                            " coefficients, expected " +
                                            std::to_string(params.degree(share.participant)));
  }
  for (auto c : share.coeffs) {
    if (c >= params.field.modulus()) {
      throw Error(Errc::invalid_argument, "share coefficient not below p");
    }
  }
}

}  // namespace

namespace detail {

std::pair<Dealing, MasterPolys> deal_with_masters(const AccessStructure& structure,
                                                  const PublicParams& params,
                                                  const HashFamily& family,
                                                  const Secret& secret, Rng& rng) {
  if (auto report = validate_params(structure, params); !report.ok()) {
    throw Error(Errc::invalid_params, report.summary());
  }
  check_secret(params, secret);
  if (family.levels() != structure.level_count() || !(family.field() == params.field)) {
    throw Error(Errc::invalid_argument, "hash family does not match the parameters");
  }

  const auto& field = params.field;
  const std::size_t m = structure.level_count();
  const std::size_t n = structure.participant_count();
  const std::size_t masked = structure.prefix_size(m - 1);
  const Poly s(field, secret.coeffs);

  // Draw order: alpha_1..alpha_m, then c_1..c_{N_{m-1}}.
  MasterPolys masters;
  for (std::size_t l = 1; l <= m; ++l) {
    const std::size_t bound = params.leading_degree_sum(structure.threshold(l));
    Poly alpha(field, draw(rng, field, bound - params.d0));
    masters.f.push_back(s + alpha.shifted(params.d0));
    masters.alpha.push_back(std::move(alpha));
  }

  Dealing dealing;
  dealing.shares.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    Share share{i, structure.level_of(i), {}};
    if (i <= masked) {
      share.coeffs = draw(rng, field, params.degree(i));
    } else {
      share.coeffs = (masters.f[m - 1] % params.moduli[i - 1]).to_vector(params.degree(i));
    }
    dealing.shares.push_back(std::move(share));
  }

  for (auto [l, i] : bulletin_keys(structure)) {
    const Poly& mi = params.moduli[i - 1];
    Poly w = (masters.f[l - 1] - family.hash_poly(l, dealing.shares[i - 1].coeffs)) % mi;
    dealing.bulletin.set(l, i, std::move(w));
  }
  return {std::move(dealing), std::move(masters)};
}

}  // namespace detail

Dealing deal(const AccessStructure& structure, const PublicParams& params,
             const HashFamily& family, const Secret& secret, Rng& rng) {
  return detail::deal_with_masters(structure, params, family, secret, rng).first;
}

Poly unmask_share(const AccessStructure& structure, const PublicParams& params,
                  const HashFamily& family, const Bulletin& bulletin, const Share& share,
                  std::size_t level) {
  const std::size_t m = structure.level_count();
  if (level == m && share.level == m) return Poly(params.field, share.coeffs);
  const Poly* w = bulletin.find(level, share.participant);
  if (w == nullptr) {
    throw Error(Errc::missing_bulletin_entry, "no mask for participant " +
                                                  std::to_string(share.participant) +
                                                  " at level " + std::to_string(level));
  }
  return family.hash_poly(level, share.coeffs) + *w;
}

Secret reconstruct(const AccessStructure& structure, const PublicParams& params,
                   const HashFamily& family, const Bulletin& bulletin,
                   std::span<const Share> shares) {
  std::map<std::size_t, const Share*> by_owner;
  for (const auto& share : shares) {
    check_share(structure, params, share);
    auto [it, inserted] = by_owner.emplace(share.participant, &share);
    if (!inserted && !(*it->second == share)) {
      throw Error(Errc::inconsistent_shares, "two different shares for participant " +
                                                 std::to_string(share.participant));
    }
  }
  std::vector<std::size_t> owners;
  for (const auto& [i, _] : by_owner) owners.push_back(i);

  const auto level = min_authorized_level(structure, owners);
  if (!level) throw Error(Errc::unauthorized_subset, "coalition does not meet any threshold");

  const std::size_t bound = structure.prefix_size(*level);
  std::vector<Poly> residues, moduli;
  std::size_t degree_sum = 0;
  for (const auto& [i, share] : by_owner) {
    if (i > bound) continue;
    residues.push_back(unmask_share(structure, params, family, bulletin, *share, *level));
    moduli.push_back(params.moduli[i - 1]);
    degree_sum += params.degree(i);
  }

  const Poly f = crt_combine(residues, moduli);
  const std::size_t f_bound = params.leading_degree_sum(structure.threshold(*level));
  // Surplus congruences over-determine f; an honest f stays below the bound.
  if (degree_sum > f_bound && f.degree() >= static_cast<int>(f_bound)) {
    throw Error(Errc::inconsistent_shares,
                "recovered polynomial has degree " + std::to_string(f.degree()) +
                    ", expected below " + std::to_string(f_bound));
  }
  return Secret{f.truncated(params.d0).to_vector(params.d0)};
}

}  // namespace crtss
