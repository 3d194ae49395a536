#include "crtss/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <thread>

#include "crtss/error.hpp"

namespace crtss::oracle {

const char* to_string(ViewMode mode) noexcept {
  return mode == ViewMode::own_masks ? "i-iv" : "i-v";
}

ViewMode parse_view_mode(const std::string& text) {
  if (text == "i-iv") return ViewMode::own_masks;
  if (text == "i-v") return ViewMode::all_masks;
  throw Error(Errc::invalid_argument, "unknown view mode '" + text + "' (expected i-iv or i-v)");
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) noexcept {
  std::uint64_t r = 1;
  for (std::uint64_t e = 0; e < exp; ++e) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) noexcept {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

void require_within(std::uint64_t states, EnumerationBudget budget) {
  if (states > budget.max_states) throw BudgetExceeded(states, budget.max_states);
}

// Fills `digits` with the base-p expansion of index, least significant first.
void decode(std::uint64_t index, std::uint64_t p, std::vector<std::uint64_t>& digits) {
  for (auto& d : digits) {
    d = index % p;
    index /= p;
  }
}

// Odometer increment; returns false on wrap-around.
bool advance(std::vector<std::uint64_t>& digits, std::uint64_t p) {
  for (auto& d : digits) {
    if (++d < p) return true;
    d = 0;
  }
  return false;
}

Poly poly_from(const PrimeField& field, std::span<const std::uint64_t> digits) {
  return Poly(field, std::vector<std::uint64_t>(digits.begin(), digits.end()));
}

}  // namespace

CoalitionView::CoalitionView(AccessStructure structure, PublicParams params,
                             std::vector<Share> coalition_shares, Bulletin bulletin,
                             ViewMode mode)
    : structure_(std::move(structure)),
      params_(std::move(params)),
      family_(params_.hash, params_.field, std::max<std::size_t>(structure_.level_count(), 1)),
      shares_(std::move(coalition_shares)),
      bulletin_(std::move(bulletin)),
      mode_(mode) {
  if (auto report = validate_params(structure_, params_); !report.ok()) {
    throw Error(Errc::invalid_params, report.summary());
  }
  std::sort(shares_.begin(), shares_.end(),
            [](const Share& a, const Share& b) { return a.participant < b.participant; });
  for (const auto& share : shares_) {
    if (!members_.empty() && members_.back() == share.participant) {
      throw Error(Errc::invalid_argument,
                  "duplicate share for participant " + std::to_string(share.participant));
    }
    if (share.level != structure_.level_of(share.participant) ||
        share.coeffs.size() != params_.degree(share.participant)) {
      throw Error(Errc::invalid_argument,
                  "malformed share for participant " + std::to_string(share.participant));
    }
    members_.push_back(share.participant);
  }
  if (is_authorized(structure_, members_)) {
    throw Error(Errc::invalid_argument, "coalition is authorized; nothing to audit");
  }
  if (mode_ == ViewMode::all_masks && params_.hash.backend != HashBackend::table) {
    throw Error(Errc::invalid_argument,
                "mode i-v enumerates hash preimages and needs the table hash backend");
  }
  for (auto [l, i] : bulletin_keys(structure_)) {
    if (bulletin_.find(l, i) == nullptr) {
      throw Error(Errc::missing_bulletin_entry, "bulletin lacks entry (" + std::to_string(l) +
                                                    ", " + std::to_string(i) + ")");
    }
  }
}

CoalitionView CoalitionView::observe(const AccessStructure& structure,
                                     const PublicParams& params, const Dealing& dealing,
                                     std::span<const std::size_t> coalition, ViewMode mode) {
  std::set<std::size_t> members(coalition.begin(), coalition.end());
  std::vector<Share> shares;
  for (auto i : members) {
    if (i < 1 || i > dealing.shares.size()) {
      throw Error(Errc::invalid_argument, "participant " + std::to_string(i) + " out of range");
    }
    shares.push_back(dealing.shares[i - 1]);
  }
  return CoalitionView(structure, params, std::move(shares), dealing.bulletin, mode);
}

const Share* CoalitionView::share_of(std::size_t participant) const {
  for (const auto& s : shares_) {
    if (s.participant == participant) return &s;
  }
  return nullptr;
}

std::uint64_t compute_theta(const AccessStructure& structure, const PublicParams& params,
                            std::span<const std::size_t> coalition) {
  if (is_authorized(structure, coalition)) {
    throw Error(Errc::invalid_argument, "theta is defined for unauthorized coalitions only");
  }
  std::set<std::size_t> members(coalition.begin(), coalition.end());
  long long theta = 0;
  for (std::size_t l = 1; l <= structure.level_count(); ++l) {
    long long term = static_cast<long long>(params.leading_degree_sum(structure.threshold(l))) -
                     static_cast<long long>(params.d0);
    const std::size_t bound = structure.prefix_size(l);
    for (auto i : members) {
      if (i <= bound) term -= static_cast<long long>(params.degree(i));
    }
    if (term < 0) {
      throw Error(Errc::invalid_params, "negative theta term at level " + std::to_string(l));
    }
    theta += term;
  }
  return static_cast<std::uint64_t>(theta);
}

std::uint64_t secret_space_size(const PrimeField& field, std::size_t d0) {
  return saturating_pow(field.modulus(), d0);
}

std::uint64_t secret_index(const PrimeField& field, const Secret& secret) {
  std::uint64_t index = 0;
  for (std::size_t j = secret.coeffs.size(); j-- > 0;) {
    index = index * field.modulus() + secret.coeffs[j];
  }
  return index;
}

Secret secret_at(const PrimeField& field, std::size_t d0, std::uint64_t index) {
  Secret s{std::vector<std::uint64_t>(d0)};
  decode(index, field.modulus(), s.coeffs);
  return s;
}

std::uint64_t dealer_state_count(const AccessStructure& structure, const PublicParams& params) {
  const std::size_t m = structure.level_count();
  std::uint64_t exponent = params.d0;
  for (std::size_t l = 1; l <= m; ++l) {
    exponent += params.leading_degree_sum(structure.threshold(l)) - params.d0;
  }
  exponent += params.leading_degree_sum(structure.prefix_size(m - 1));
  return saturating_pow(params.field.modulus(), exponent);
}

std::uint64_t Histogram::total() const noexcept {
  std::uint64_t t = 0;
  for (auto c : counts) t = saturating_add(t, c);
  return t;
}

bool Histogram::uniform() const noexcept {
  if (counts.empty()) return false;
  return std::all_of(counts.begin(), counts.end(),
                     [&](std::uint64_t c) { return c == counts.front(); });
}

Histogram enumerate_consistent(const CoalitionView& view, EnumerationBudget budget,
                               unsigned workers) {
  const auto& s = view.structure();
  const auto& params = view.params();
  const auto& field = params.field;
  const auto& family = view.family();
  const auto& bulletin = view.bulletin();
  const std::uint64_t p = field.modulus();
  const std::size_t m = s.level_count();
  const std::size_t masked = s.prefix_size(m - 1);
  const std::size_t d0 = params.d0;

  Histogram hist;
  hist.states = dealer_state_count(s, params);
  require_within(hist.states, budget);
  hist.counts.assign(secret_space_size(field, d0), 0);

  // Outer digits: s, then alpha_1..alpha_m. The masked shares c_i are walked
  // per participant inside: each one's constraints involve only its own c_i
  // and the f_l, so the count over all c-tuples is the product of the
  // per-participant counts. Coalition members' c_i are pinned to their share.
  std::vector<std::size_t> alpha_len;
  std::size_t outer_len = d0;
  for (std::size_t l = 1; l <= m; ++l) {
    alpha_len.push_back(params.leading_degree_sum(s.threshold(l)) - d0);
    outer_len += alpha_len.back();
  }
  const std::uint64_t outer_states = saturating_pow(p, outer_len);

  struct Check {
    std::size_t level;
    std::size_t participant;
    Poly expected;  // residue of f_level mod m_participant
  };
  std::vector<Check> pinned;
  for (const auto& share : view.shares()) {
    const std::size_t i = share.participant;
    if (i > masked) {
      pinned.push_back({m, i, Poly(field, share.coeffs)});
      continue;
    }
    for (std::size_t l = share.level; l <= m; ++l) {
      pinned.push_back({l, i, unmask_share(s, params, family, bulletin, share, l)});
    }
  }
  std::vector<std::size_t> outsiders;
  for (std::size_t i = 1; i <= masked; ++i) {
    if (view.share_of(i) == nullptr) outsiders.push_back(i);
  }

  auto work = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& counts) {
    std::vector<std::uint64_t> digits(outer_len);
    decode(begin, p, digits);
    std::vector<Poly> f;
    for (std::uint64_t state = begin; state < end; ++state, advance(digits, p)) {
      const Poly secret = poly_from(field, std::span(digits).first(d0));
      f.clear();
      std::size_t offset = d0;
      for (std::size_t l = 0; l < m; ++l) {
        f.push_back(secret + poly_from(field, std::span(digits).subspan(offset, alpha_len[l]))
                                 .shifted(d0));
        offset += alpha_len[l];
      }
      bool consistent = true;
      for (const auto& c : pinned) {
        if (f[c.level - 1] % params.moduli[c.participant - 1] != c.expected) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;

      std::uint64_t weight = 1;
      for (auto i : outsiders) {
        const std::size_t di = params.degree(i);
        if (view.mode() == ViewMode::own_masks) {
          weight = saturating_mul(weight, saturating_pow(p, di));
          continue;
        }
        const Poly& mi = params.moduli[i - 1];
        const std::size_t first = s.level_of(i);
        std::vector<Poly> targets;
        for (std::size_t l = first; l <= m; ++l) {
          targets.push_back((f[l - 1] - *bulletin.find(l, i)) % mi);
        }
        std::uint64_t matches = 0;
        std::vector<std::uint64_t> c(di, 0);
        do {
          bool ok = true;
          for (std::size_t l = first; l <= m && ok; ++l) {
            ok = family.hash_poly(l, c) % mi == targets[l - first];
          }
          if (ok) ++matches;
        } while (advance(c, p));
        weight = saturating_mul(weight, matches);
        if (weight == 0) break;
      }
      const std::uint64_t idx = state % hist.counts.size();
      counts[idx] = saturating_add(counts[idx], weight);
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, outer_states));
  std::vector<std::vector<std::uint64_t>> partial(workers,
                                                  std::vector<std::uint64_t>(hist.counts.size()));
  std::vector<std::thread> threads;
  const std::uint64_t chunk = outer_states / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = w + 1 == workers ? outer_states : begin + chunk;
    threads.emplace_back(work, begin, end, std::ref(partial[w]));
  }
  for (auto& t : threads) t.join();
  for (const auto& part : partial) {
    for (std::size_t j = 0; j < part.size(); ++j) {
      hist.counts[j] = saturating_add(hist.counts[j], part[j]);
    }
  }
  return hist;
}

namespace {

std::uint64_t preimage_work(const CoalitionView& view) {
  const auto& s = view.structure();
  const auto& params = view.params();
  std::uint64_t total = 0;
  for (std::size_t l = 1; l <= s.level_count(); ++l) {
    total = saturating_add(
        total, saturating_pow(params.field.modulus(),
                              params.leading_degree_sum(s.threshold(l)) - params.d0));
  }
  return total;
}

std::uint64_t count_preimage_unchecked(const CoalitionView& view, const Secret& secret) {
  const auto& s = view.structure();
  const auto& params = view.params();
  const auto& field = params.field;
  const std::uint64_t p = field.modulus();
  const std::size_t d0 = params.d0;
  const Poly x_d0 = Poly::monomial(field, 1, d0);
  const Poly secret_poly(field, secret.coeffs);

  std::uint64_t product = 1;
  for (std::size_t l = 1; l <= s.level_count(); ++l) {
    const std::size_t bound = s.prefix_size(l);
    const std::size_t f_bound = params.leading_degree_sum(s.threshold(l));
    std::vector<Poly> residues{secret_poly};
    std::vector<Poly> moduli{x_d0};
    for (const auto& share : view.shares()) {
      if (share.participant > bound) continue;
      residues.push_back(unmask_share(s, params, view.family(), view.bulletin(), share, l));
      moduli.push_back(params.moduli[share.participant - 1]);
    }
    const Poly base = crt_combine(residues, moduli);
    Poly modulus = Poly::constant(field, 1);
    for (const auto& mi : moduli) modulus = modulus * mi;

    // Walk every k of degree < f_bound - d0 and keep g = base + k*M that
    // lands below the degree bound and meets every congruence.
    std::uint64_t count = 0;
    std::vector<std::uint64_t> k(f_bound - d0, 0);
    do {
      const Poly g = base + Poly(field, k) * modulus;
      if (g.degree() >= static_cast<int>(f_bound)) continue;
      bool ok = true;
      for (std::size_t j = 0; j < moduli.size() && ok; ++j) {
        ok = g % moduli[j] == residues[j] % moduli[j];
      }
      if (ok) ++count;
    } while (advance(k, p));
    product = saturating_mul(product, count);
  }
  return product;
}

}  // namespace

std::uint64_t count_preimage(const CoalitionView& view, const Secret& secret,
                             EnumerationBudget budget) {
  check_secret(view.params(), secret);
  require_within(preimage_work(view), budget);
  return count_preimage_unchecked(view, secret);
}

std::uint64_t count_F(const CoalitionView& view, EnumerationBudget budget) {
  const auto& field = view.params().field;
  const std::uint64_t secrets = secret_space_size(field, view.params().d0);
  require_within(saturating_mul(secrets, preimage_work(view)), budget);
  std::uint64_t total = 0;
  for (std::uint64_t idx = 0; idx < secrets; ++idx) {
    total = saturating_add(
        total, count_preimage_unchecked(view, secret_at(field, view.params().d0, idx)));
  }
  return total;
}

double loss_entropy(const Histogram& histogram, const PrimeField& field, std::size_t d0) {
  const std::uint64_t total = histogram.total();
  if (total == 0) throw Error(Errc::invalid_argument, "no dealer state reproduces the view");
  const std::uint64_t secrets = secret_space_size(field, d0);
  if (histogram.counts.size() != secrets) {
    throw Error(Errc::invalid_argument, "histogram does not cover the secret space");
  }
  // Exact zero when every secret is equally likely.
  if (histogram.uniform()) return 0.0;
  // H(S) - H(S|v) = sum_s Pr(s|v) log2(Pr(s|v) * |S|)
  long double delta = 0;
  for (auto c : histogram.counts) {
    if (c == 0) continue;
    const long double pr = static_cast<long double>(c) / static_cast<long double>(total);
    delta += pr * std::log2(pr * static_cast<long double>(secrets));
  }
  return static_cast<double>(delta);
}

double loss_entropy(const CoalitionView& view, EnumerationBudget budget) {
  return loss_entropy(enumerate_consistent(view, budget), view.params().field, view.params().d0);
}

namespace {

void check_crt_inputs(std::span<const Poly> residues, std::span<const Poly> moduli) {
  if (moduli.empty() || residues.size() != moduli.size()) {
    throw Error(Errc::invalid_argument, "one residue per modulus required");
  }
  for (const auto& m : moduli) {
    if (m.degree() < 1) throw Error(Errc::invalid_argument, "modulus must have degree >= 1");
  }
}

std::uint64_t candidate_space(std::span<const Poly> moduli, std::size_t& total_degree) {
  total_degree = 0;
  for (const auto& m : moduli) total_degree += static_cast<std::size_t>(m.degree());
  return saturating_pow(moduli.front().field().modulus(), total_degree);
}

}  // namespace

Poly crt_bruteforce(std::span<const Poly> residues, std::span<const Poly> moduli,
                    std::uint64_t max_states) {
  check_crt_inputs(residues, moduli);
  std::size_t degree = 0;
  const std::uint64_t space = candidate_space(moduli, degree);
  if (space > max_states) throw BudgetExceeded(space, max_states);

  const auto& field = moduli.front().field();
  std::vector<Poly> targets;
  for (std::size_t i = 0; i < moduli.size(); ++i) targets.push_back(residues[i] % moduli[i]);

  std::vector<Poly> found;
  std::vector<std::uint64_t> c(degree, 0);
  do {
    Poly y(field, c);
    bool ok = true;
    for (std::size_t i = 0; i < moduli.size() && ok; ++i) ok = y % moduli[i] == targets[i];
    if (ok) found.push_back(std::move(y));
  } while (advance(c, field.modulus()));

  if (found.size() != 1) {
    throw Error(Errc::no_solution, std::to_string(found.size()) +
                                       " polynomials satisfy the congruences");
  }
  return found.front();
}

CrtBruteforceTable::CrtBruteforceTable(std::vector<Poly> moduli, std::uint64_t max_states)
    : moduli_(std::move(moduli)) {
  if (moduli_.empty()) throw Error(Errc::invalid_argument, "no moduli");
  std::size_t degree = 0;
  candidates_ = candidate_space(moduli_, degree);
  if (candidates_ > max_states) throw BudgetExceeded(candidates_, max_states);
  for (const auto& m : moduli_) {
    if (m.degree() < 1) throw Error(Errc::invalid_argument, "modulus must have degree >= 1");
  }
  const auto& field = moduli_.front().field();
  std::vector<std::uint64_t> c(degree, 0);
  std::vector<Poly> residues;
  do {
    Poly y(field, c);
    residues.clear();
    for (const auto& m : moduli_) residues.push_back(y % m);
    buckets_[key(residues)].push_back(std::move(y));
  } while (advance(c, field.modulus()));
}

std::vector<std::uint64_t> CrtBruteforceTable::key(std::span<const Poly> residues) const {
  std::vector<std::uint64_t> k;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    auto part = (residues[i] % moduli_[i]).to_vector(static_cast<std::size_t>(moduli_[i].degree()));
    k.insert(k.end(), part.begin(), part.end());
  }
  return k;
}

Poly CrtBruteforceTable::solve(std::span<const Poly> residues) const {
  check_crt_inputs(residues, moduli_);
  auto it = buckets_.find(key(residues));
  const std::size_t hits = it == buckets_.end() ? 0 : it->second.size();
  if (hits != 1) {
    throw Error(Errc::no_solution, std::to_string(hits) + " polynomials satisfy the congruences");
  }
  return it->second.front();
}

}  // namespace crtss::oracle
