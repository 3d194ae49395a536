#include "crtss/params.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "crtss/error.hpp"

namespace crtss {

std::size_t AccessStructure::participant_count() const noexcept {
  return std::accumulate(level_sizes.begin(), level_sizes.end(), std::size_t{0});
}

std::size_t AccessStructure::prefix_size(std::size_t level) const {
  if (level > level_sizes.size()) {
    throw Error(Errc::invalid_argument, "level " + std::to_string(level) + " out of range");
  }
  return std::accumulate(level_sizes.begin(), level_sizes.begin() + level, std::size_t{0});
}

std::size_t AccessStructure::level_of(std::size_t participant) const {
  std::size_t upper = 0;
  for (std::size_t l = 0; l < level_sizes.size(); ++l) {
    upper += level_sizes[l];
    if (participant >= 1 && participant <= upper) return l + 1;
  }
  throw Error(Errc::invalid_argument,
              "participant " + std::to_string(participant) + " out of range");
}

std::vector<std::size_t> PublicParams::degrees() const {
  std::vector<std::size_t> out;
  out.reserve(moduli.size());
  for (const auto& m : moduli) out.push_back(static_cast<std::size_t>(std::max(m.degree(), 0)));
  return out;
}

std::size_t PublicParams::degree(std::size_t participant) const {
  return static_cast<std::size_t>(std::max(moduli.at(participant - 1).degree(), 0));
}

std::size_t PublicParams::leading_degree_sum(std::size_t count) const {
  std::size_t sum = 0;
  for (std::size_t i = 1; i <= count; ++i) sum += degree(i);
  return sum;
}

const char* to_string(Violation v) noexcept {
  switch (v) {
    case Violation::no_levels: return "no-levels";
    case Violation::level_size_mismatch: return "level-size-mismatch";
    case Violation::empty_level: return "empty-level";
    case Violation::zero_threshold: return "zero-threshold";
    case Violation::thresholds_not_increasing: return "thresholds-not-increasing";
    case Violation::threshold_exceeds_level: return "threshold-exceeds-level";
    case Violation::secret_degree_zero: return "secret-degree-zero";
    case Violation::modulus_count: return "modulus-count";
    case Violation::modulus_degree: return "modulus-degree";
    case Violation::modulus_divisible_by_x: return "modulus-divisible-by-x";
    case Violation::degrees_not_ascending: return "degrees-not-ascending";
    case Violation::degree_budget: return "degree-budget";
    case Violation::moduli_not_coprime: return "moduli-not-coprime";
  }
  return "unknown";
}

bool ValidationReport::has(Violation v) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [v](const Entry& e) { return e.kind == v; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& e : violations) os << to_string(e.kind) << ": " << e.detail << "\n";
  return os.str();
}

ValidationReport validate_structure(const AccessStructure& s) {
  ValidationReport report;
  auto add = [&](Violation v, std::string detail) {
    report.violations.push_back({v, std::move(detail)});
  };
  if (s.level_sizes.empty()) add(Violation::no_levels, "at least one level is required");
  if (s.level_sizes.size() != s.thresholds.size()) {
    add(Violation::level_size_mismatch, std::to_string(s.level_sizes.size()) + " levels but " +
                                            std::to_string(s.thresholds.size()) + " thresholds");
    return report;
  }
  for (std::size_t l = 0; l < s.level_sizes.size(); ++l) {
    const auto lvl = std::to_string(l + 1);
    if (s.level_sizes[l] == 0) add(Violation::empty_level, "level " + lvl + " is empty");
    if (s.thresholds[l] == 0) add(Violation::zero_threshold, "t_" + lvl + " = 0");
    if (l > 0 && s.thresholds[l] <= s.thresholds[l - 1]) {
      add(Violation::thresholds_not_increasing,
          "t_" + lvl + " = " + std::to_string(s.thresholds[l]) + " <= t_" + std::to_string(l) +
              " = " + std::to_string(s.thresholds[l - 1]));
    }
    if (s.thresholds[l] > s.level_sizes[l]) {
      add(Violation::threshold_exceeds_level,
          "t_" + lvl + " = " + std::to_string(s.thresholds[l]) + " > n_" + lvl + " = " +
              std::to_string(s.level_sizes[l]));
    }
  }
  return report;
}

ValidationReport validate_degree_profile(const AccessStructure& s, std::size_t d0,
                                         std::span<const std::size_t> d) {
  ValidationReport report;
  auto add = [&](Violation v, std::string detail) {
    report.violations.push_back({v, std::move(detail)});
  };
  if (d0 == 0) add(Violation::secret_degree_zero, "d0 must be at least 1");
  const std::size_t n = d.size();
  if (n != s.participant_count()) {
    add(Violation::modulus_count, std::to_string(n) + " moduli for " +
                                      std::to_string(s.participant_count()) + " participants");
    return report;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] == 0) add(Violation::modulus_degree, "m_" + std::to_string(i + 1) + " is constant");
    const std::size_t prev = i == 0 ? d0 : d[i - 1];
    if (d[i] < prev) {
      add(Violation::degrees_not_ascending,
          "d_" + std::to_string(i + 1) + " = " + std::to_string(d[i]) + " < " +
              (i == 0 ? std::string("d0") : "d_" + std::to_string(i)) + " = " +
              std::to_string(prev));
    }
  }
  for (std::size_t l = 0; l < s.thresholds.size(); ++l) {
    const std::size_t t = s.thresholds[l];
    if (t == 0 || t > n) continue;
    std::size_t low = 0, high = d0;
    for (std::size_t i = 0; i < t; ++i) low += d[i];
    for (std::size_t i = n - (t - 1); i < n; ++i) high += d[i];
    if (high > low) {
      add(Violation::degree_budget,
          "level " + std::to_string(l + 1) + ": d0 + largest " + std::to_string(t - 1) +
              " degrees = " + std::to_string(high) + " > smallest " + std::to_string(t) +
              " degrees = " + std::to_string(low));
    }
  }
  return report;
}

ValidationReport validate_params(const AccessStructure& structure, const PublicParams& params) {
  ValidationReport report = validate_structure(structure);
  auto degrees = params.degrees();
  auto profile = validate_degree_profile(structure, params.d0, degrees);
  report.violations.insert(report.violations.end(), profile.violations.begin(),
                           profile.violations.end());

  bool any_zero = false;
  for (std::size_t i = 0; i < params.moduli.size(); ++i) {
    const auto& m = params.moduli[i];
    if (!(m.field() == params.field)) {
      report.violations.push_back(
          {Violation::modulus_degree, "m_" + std::to_string(i + 1) + " is over another field"});
      return report;
    }
    if (m.is_zero()) {
      any_zero = true;
      continue;
    }
    if (m.coeff(0) == 0) {
      report.violations.push_back({Violation::modulus_divisible_by_x,
                                   "m_" + std::to_string(i + 1) + " has zero constant term"});
    }
  }
  if (!any_zero && !is_pairwise_coprime(params.moduli)) {
    report.violations.push_back({Violation::moduli_not_coprime, "some pair shares a factor"});
  }
  return report;
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) throw Error(Errc::invalid_argument, "irreducibility needs degree >= 1");
  const Poly g = f.monic();
  const auto& field = g.field();
  const int d = g.degree();
  if (d == 1) return true;
  const Poly x = Poly::monomial(field, 1, 1);
  Poly h = x % g;
  for (int k = 1; k <= d / 2; ++k) {
    h = pow_mod(h, field.modulus(), g);
    if (!gcd(h - x, g).is_one()) return false;
  }
  return true;
}

namespace {

int moebius(std::size_t n) {
  int mu = 1;
  for (std::size_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

Poly monic_from_index(const PrimeField& field, std::size_t degree, std::uint64_t index) {
  std::vector<std::uint64_t> c(degree + 1, 0);
  for (std::size_t j = 0; j < degree; ++j) {
    c[j] = index % field.modulus();
    index /= field.modulus();
  }
  c[degree] = 1;
  return Poly(field, std::move(c));
}

bool is_x(const Poly& f) { return f.degree() == 1 && f.coeff(0) == 0; }

}  // namespace

std::uint64_t count_monic_irreducibles(const PrimeField& field, std::size_t degree) {
  if (degree == 0) return 0;
  const double bits = static_cast<double>(degree) * static_cast<double>(field.floor_log2() + 1);
  if (bits > 120) return UINT64_MAX;
  __int128 total = 0;
  for (std::size_t k = 1; k <= degree; ++k) {
    if (degree % k != 0) continue;
    const int mu = moebius(k);
    if (mu == 0) continue;
    __int128 term = 1;
    for (std::size_t e = 0; e < degree / k; ++e) term *= field.modulus();
    total += mu * term;
  }
  total /= static_cast<__int128>(degree);
  if (total > static_cast<__int128>(UINT64_MAX)) return UINT64_MAX;
  return static_cast<std::uint64_t>(total);
}

std::vector<Poly> generate_moduli(const PrimeField& field,
                                  std::span<const std::size_t> profile, Rng& rng) {
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] == 0) throw Error(Errc::invalid_argument, "modulus degree must be >= 1");
    if (i > 0 && profile[i] < profile[i - 1]) {
      throw Error(Errc::invalid_argument, "degree profile must be nondecreasing");
    }
  }
  constexpr std::uint64_t kEnumerateLimit = 1u << 16;
  std::vector<Poly> out;
  out.reserve(profile.size());

  std::size_t i = 0;
  while (i < profile.size()) {
    const std::size_t degree = profile[i];
    std::size_t want = 0;
    while (i + want < profile.size() && profile[i + want] == degree) ++want;
    i += want;

    std::uint64_t available = count_monic_irreducibles(field, degree);
    if (degree == 1) --available;
    if (want > available) {
      throw Error(Errc::insufficient_irreducibles,
                  "need " + std::to_string(want) + " monic irreducibles of degree " +
                      std::to_string(degree) + " over F_" + std::to_string(field.modulus()) +
                      ", only " + std::to_string(available) + " usable");
    }

    std::uint64_t space = 1;
    bool small = true;
    for (std::size_t e = 0; e < degree; ++e) {
      if (space > kEnumerateLimit / field.modulus()) {
        small = false;
        break;
      }
      space *= field.modulus();
    }

    if (small) {
      std::vector<Poly> pool;
      for (std::uint64_t k = 0; k < space; ++k) {
        Poly f = monic_from_index(field, degree, k);
        if (!is_x(f) && is_irreducible(f)) pool.push_back(std::move(f));
      }
      for (std::size_t k = 0; k < want; ++k) {
        std::size_t pick = k + static_cast<std::size_t>(rng.uniform(pool.size() - k));
        std::swap(pool[k], pool[pick]);
        out.push_back(pool[k]);
      }
    } else {
      std::set<std::vector<std::uint64_t>> seen;
      std::size_t found = 0;
      while (found < want) {
        std::vector<std::uint64_t> c(degree + 1);
        for (std::size_t j = 0; j < degree; ++j) c[j] = rng.uniform(field.modulus());
        c[degree] = 1;
        Poly f(field, c);
        if (is_x(f) || seen.count(c) || !is_irreducible(f)) continue;
        seen.insert(std::move(c));
        out.push_back(std::move(f));
        ++found;
      }
    }
  }
  return out;
}

namespace {

std::vector<std::size_t> level_counts(const AccessStructure& s,
                                      std::span<const std::size_t> subset) {
  const std::size_t n = s.participant_count();
  std::set<std::size_t> members;
  for (auto i : subset) {
    if (i < 1 || i > n) {
      throw Error(Errc::invalid_argument, "participant " + std::to_string(i) +
                                              " outside [1, " + std::to_string(n) + "]");
    }
    members.insert(i);
  }
  std::vector<std::size_t> prefix_counts(s.level_count(), 0);
  for (std::size_t l = 1; l <= s.level_count(); ++l) {
    const std::size_t bound = s.prefix_size(l);
    prefix_counts[l - 1] = static_cast<std::size_t>(
        std::count_if(members.begin(), members.end(), [bound](std::size_t i) { return i <= bound; }));
  }
  return prefix_counts;
}

}  // namespace

std::optional<std::size_t> min_authorized_level(const AccessStructure& s,
                                                std::span<const std::size_t> subset) {
  auto counts = level_counts(s, subset);
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] >= s.thresholds.at(l)) return l + 1;
  }
  return std::nullopt;
}

bool is_authorized(const AccessStructure& s, std::span<const std::size_t> subset) {
  return min_authorized_level(s, subset).has_value();
}

Ratio information_rate(const AccessStructure&, const PublicParams& params) {
  std::size_t max_degree = 0;
  for (auto d : params.degrees()) max_degree = std::max(max_degree, d);
  if (max_degree == 0) throw Error(Errc::invalid_params, "no share degrees");
  const std::uint64_t g = std::gcd<std::uint64_t, std::uint64_t>(params.d0, max_degree);
  return {params.d0 / g, max_degree / g};
}

}  // namespace crtss
