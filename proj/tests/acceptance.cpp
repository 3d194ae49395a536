// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "crtss/io.hpp"
#include "crtss/oracle.hpp"
#include "crtss/yang.hpp"
#include "support.hpp"

using namespace crtss;
using crtss::testing::all_polys;
using crtss::testing::members_of;

namespace {

// Pinned tolerances.
constexpr double kTrendSlack = 1e-9;  // float noise allowed in the mean-delta comparison
constexpr int kTrendSeeds = 40;       // at least 20 required

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %s %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

// Sets of distinct monic polynomials of degree >= 1 with total degree <= budget,
// in non-decreasing position order.
void moduli_sets(const std::vector<Poly>& pool, std::size_t from, int budget,
                 std::vector<Poly>& current, const std::function<void(const std::vector<Poly>&)>& visit) {
  if (!current.empty()) visit(current);
  for (std::size_t k = from; k < pool.size(); ++k) {
    if (pool[k].degree() > budget) continue;
    current.push_back(pool[k]);
    moduli_sets(pool, k + 1, budget - pool[k].degree(), current, visit);
    current.pop_back();
  }
}

Outcome crt_equivalence() {
  std::uint64_t sets = 0, tuples = 0, mismatches = 0;
  for (std::uint64_t p : {2, 3, 5}) {
    const PrimeField f(p);
    std::vector<Poly> pool;
    for (std::size_t d = 1; d <= 4; ++d) {
      for (auto& g : testing::monic_polys(f, d)) pool.push_back(std::move(g));
    }
    std::vector<Poly> current;
    moduli_sets(pool, 0, 4, current, [&](const std::vector<Poly>& moduli) {
      if (!is_pairwise_coprime(moduli)) return;
      ++sets;
      const oracle::CrtBruteforceTable table(moduli);
      std::vector<std::vector<Poly>> choices;
      for (const auto& m : moduli) choices.push_back(all_polys(f, m.degree()));
      std::vector<std::size_t> idx(moduli.size(), 0);
      std::vector<Poly> residues(moduli.size(), Poly(f));
      while (true) {
        for (std::size_t j = 0; j < moduli.size(); ++j) residues[j] = choices[j][idx[j]];
        ++tuples;
        if (crt_combine(residues, moduli) != table.solve(residues)) ++mismatches;
        std::size_t j = 0;
        while (j < idx.size() && ++idx[j] == choices[j].size()) idx[j++] = 0;
        if (j == idx.size()) break;
      }
    });
  }
  std::ostringstream d;
  d << sets << " moduli sets, " << tuples << " residue tuples, " << mismatches << " mismatches";
  return {mismatches == 0 && sets > 0, d.str()};
}

Outcome correctness() {
  Rng rng(20240601);
  const std::uint64_t primes[] = {11, 101, 2147483647};
  std::uint64_t subsets = 0, failures_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto cfg = testing::random_config(rng, primes[trial % 3], 3, 10);
    const auto& s = cfg.structure;
    const HashFamily fam(cfg.params.hash, cfg.params.field, s.level_count());
    const auto secret = testing::random_secret(cfg.params, rng);
    const auto dealing = deal(s, cfg.params, fam, secret, rng);
    const auto n = s.participant_count();
    auto attempt = [&](const std::vector<std::size_t>& members) {
      std::vector<Share> picked;
      for (auto i : members) picked.push_back(dealing.shares[i - 1]);
      ++subsets;
      try {
        if (reconstruct(s, cfg.params, fam, dealing.bulletin, picked) != secret) ++failures_seen;
      } catch (const Error&) {
        ++failures_seen;
      }
    };
    if (n <= 8) {
      for (std::uint64_t mask = 1; mask < (1u << n); ++mask) {
        const auto members = members_of(mask, n);
        if (is_authorized(s, members)) attempt(members);
      }
    } else {
      for (int k = 0; k < 50;) {
        const auto members = members_of(1 + rng.uniform((1u << n) - 1), n);
        if (!is_authorized(s, members)) continue;
        attempt(members);
        ++k;
      }
    }
  }
  std::ostringstream d;
  d << "200 configurations, " << subsets << " authorized subsets, " << failures_seen << " failures";
  return {failures_seen == 0, d.str()};
}

// Levels (2,2), t=(1,2), d0=1. Degrees (1,2,2,2) because F_3 has only two
// linear irreducibles other than x.
const AccessStructure kSmall{{2, 2}, {1, 2}};
const std::vector<std::size_t> kSmallDegrees{1, 2, 2, 2};

oracle::CoalitionView small_view(std::uint64_t p, std::uint64_t seed, oracle::ViewMode mode) {
  Rng rng(seed);
  const PrimeField f(p);
  const PublicParams params{f, 1, generate_moduli(f, kSmallDegrees, rng),
                            HashSpec{HashBackend::table, rng.next()}};
  const HashFamily fam(params.hash, f, 2);
  const Secret secret{{rng.uniform(p)}};
  const auto dealing = deal(kSmall, params, fam, secret, rng);
  const std::vector<std::size_t> b{3};
  return oracle::CoalitionView::observe(kSmall, params, dealing, b, mode);
}

Outcome exact_uniformity() {
  bool ok = true;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto view = small_view(3, seed, oracle::ViewMode::own_masks);
    const auto h = oracle::enumerate_consistent(view, {});
    const double delta = oracle::loss_entropy(h, view.params().field, 1);
    ok = ok && h.uniform() && delta == 0.0 && h.counts.size() == 3;
    if (seed == 1) d << "histogram [" << h.counts[0] << "," << h.counts[1] << "," << h.counts[2] << "]";
  }
  d << ", uniform with delta = 0 on 5 dealings, H(S|V') = log2(3)";
  return {ok, d.str()};
}

Outcome counting_lemmas() {
  struct Tiny {
    AccessStructure structure;
    std::uint64_t p;
    std::size_t d0;
    std::vector<std::size_t> degrees;
  };
  const std::vector<Tiny> configs{
      {{{2, 2}, {1, 2}}, 3, 1, {1, 2, 2, 2}}, {{{1, 2}, {1, 2}}, 3, 1, {1, 2, 2}},
      {{{3}, {2}}, 3, 2, {2, 2, 2}},          {{{2, 2}, {1, 2}}, 5, 1, {1, 1, 1, 1}},
      {{{1, 3}, {1, 3}}, 5, 1, {1, 1, 1, 1}}, {{{3}, {2}}, 5, 1, {1, 1, 1}},
      {{{2, 3}, {1, 3}}, 5, 1, {1, 2, 2, 2, 2}},
  };
  std::uint64_t pairs = 0, bad = 0;
  for (const auto& t : configs) {
    const auto params = testing::make_params(t.p, t.d0, t.degrees, t.p * 7 + t.d0,
                                             HashSpec{HashBackend::table, 99});
    const HashFamily fam(params.hash, params.field, t.structure.level_count());
    Rng rng(t.p);
    const auto dealing = deal(t.structure, params, fam, testing::random_secret(params, rng), rng);
    const auto n = t.structure.participant_count();
    for (std::uint64_t mask = 0; mask < (1u << n); ++mask) {
      const auto b = members_of(mask, n);
      if (is_authorized(t.structure, b)) continue;
      ++pairs;
      const auto view = oracle::CoalitionView::observe(t.structure, params, dealing, b,
                                                       oracle::ViewMode::own_masks);
      const auto theta = oracle::compute_theta(t.structure, params, b);
      const auto want = oracle::saturating_pow(t.p, theta);
      for (std::uint64_t idx = 0; idx < oracle::secret_space_size(params.field, t.d0); ++idx) {
        if (oracle::count_preimage(view, oracle::secret_at(params.field, t.d0, idx), {}) != want) ++bad;
      }
      if (oracle::count_F(view, {}) != oracle::saturating_pow(t.p, theta + t.d0)) ++bad;
    }
  }
  std::ostringstream d;
  d << pairs << " (structure, coalition) pairs over 7 structures at p in {3,5}, " << bad
    << " count mismatches";
  return {bad == 0 && pairs >= 5, d.str()};
}

Outcome attack_reproduction() {
  const AccessStructure s{{3, 4}, {2, 3}};
  const std::vector<std::size_t> coalition{4, 5};
  if (is_authorized(s, coalition)) return {false, "coalition {4,5} is authorized"};
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto params = testing::make_params(11, 1, std::vector<std::size_t>(7, 1), seed);
    Rng rng(seed ^ 0x5eed);
    const Secret secret{{rng.uniform(11)}};
    const auto d = yang::yang_deal(s, params, secret, rng);
    std::vector<yang::YangShare> shares{d.shares[3], d.shares[4]};
    if (yang::yang_attack(d.pub, shares) == secret) ++wins;
  }
  return {wins == 1000, "unauthorized coalition {4,5} recovered " + std::to_string(wins) +
                            "/1000 secrets"};
}

Outcome information_rate_check() {
  Rng rng(6);
  const PrimeField f(101);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform(6);
    const std::size_t d0 = 1 + rng.uniform(3);
    std::vector<std::size_t> degrees(n, d0);
    if (trial % 2) {
      for (auto& d : degrees) d = d0 + rng.uniform(3);
      std::sort(degrees.begin(), degrees.end());
    }
    const PublicParams params{f, d0, generate_moduli(f, degrees, rng), {}};
    const auto rate = information_rate({{n}, {1}}, params);
    const auto top = *std::max_element(degrees.begin(), degrees.end());
    const auto g = std::gcd(d0, top);
    const bool all_equal = std::all_of(degrees.begin(), degrees.end(), [&](auto d) { return d == d0; });
    const bool good = all_equal ? rate == Ratio{1, 1} : rate == Ratio{d0 / g, top / g};
    ok += good;
  }
  return {ok == 100, std::to_string(ok) + "/100 profiles match d0/max d_i exactly"};
}

Outcome loss_trend() {
  const std::uint64_t primes[] = {3, 5, 7, 11};
  std::vector<double> means;
  std::ostringstream d;
  d << "mean delta (i-v) over " << kTrendSeeds << " table seeds:";
  for (auto p : primes) {
    double sum = 0;
    for (int seed = 0; seed < kTrendSeeds; ++seed) {
      const auto view = small_view(p, 1000 * p + seed, oracle::ViewMode::all_masks);
      sum += oracle::loss_entropy(oracle::enumerate_consistent(view, {}), view.params().field, 1);
    }
    means.push_back(sum / kTrendSeeds);
    char buf[64];
    std::snprintf(buf, sizeof buf, " p=%llu %.4f (H(S)=%.4f)", static_cast<unsigned long long>(p),
                  means.back(), std::log2(static_cast<double>(p)));
    d << buf;
  }
  bool monotone = true;
  for (std::size_t k = 1; k < means.size(); ++k) monotone = monotone && means[k] <= means[k - 1] + kTrendSlack;
  d << (monotone ? " (non-increasing)" : " (not monotone)");
  return {monotone, d.str()};
}

Outcome cli_round_trip() {
  using crtss::testing::run_cli;
  crtss::testing::TempDir dir("acceptance_cli");
  auto gen = [&](const std::string& out) {
    return run_cli({"gen-params", "--p", "101", "--levels", "3,4", "--thresholds", "2,3",
                    "--degrees", "2x7", "--d0", "2", "--seed", "17", "--out", dir / out});
  };
  if (gen("p1.json").code != 0 || gen("p2.json").code != 0) return {false, "gen-params failed"};
  const auto params = dir / "p1.json";
  bool identical = io::read_file(params) == io::read_file(dir / "p2.json");
  for (const char* sub : {"a", "b"}) {
    if (run_cli({"deal", "--params", params, "--secret", "42 7", "--seed", "9", "--out", dir / sub}).code != 0) {
      return {false, "deal failed"};
    }
  }
  std::vector<std::string> names{"bulletin.json"};
  for (int i = 1; i <= 7; ++i) names.push_back("share_" + std::to_string(i) + ".json");
  for (const auto& name : names) {
    identical = identical && io::read_file(dir / ("a/" + name)) == io::read_file(dir / ("b/" + name));
  }
  int matches = 0;
  const std::vector<std::vector<int>> subsets{{1, 2}, {2, 3}, {4, 5, 6}, {1, 6, 7}, {1, 2, 3, 4, 5, 6, 7}};
  for (const auto& subset : subsets) {
    std::vector<std::string> args{"reconstruct", "--params", params, "--bulletin", dir / "a/bulletin.json"};
    for (int i : subset) args.push_back(dir / ("a/share_" + std::to_string(i) + ".json"));
    const auto r = run_cli(args);
    matches += r.code == 0 && r.out == "42 7\n";
  }
  std::ostringstream d;
  d << matches << "/" << subsets.size() << " reconstructions exact, fixed-seed outputs "
    << (identical ? "byte-identical" : "DIFFER");
  return {identical && matches == static_cast<int>(subsets.size()), d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* id;
    const char* name;
    Outcome (*body)();
  };
  const Criterion all[] = {
      {"AC1", "CRT oracle equivalence", crt_equivalence},
      {"AC2", "correctness over random configurations", correctness},
      {"AC3", "exact uniformity of the restricted view", exact_uniformity},
      {"AC4", "preimage and |F| counts", counting_lemmas},
      {"AC5", "attack on the two-level scheme", attack_reproduction},
      {"AC6", "information rate", information_rate_check},
      {"AC7", "loss entropy trend", loss_trend},
      {"AC8", "CLI round trip", cli_round_trip},
  };
  // With arguments, run only the named criteria.
  int ran = 0;
  for (const auto& c : all) {
    bool wanted = argc == 1;
    for (int k = 1; k < argc; ++k) wanted = wanted || std::string(argv[k]) == c.id;
    if (!wanted) continue;
    report(c.id, c.name, c.body);
    ++ran;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion matches the arguments\n");
    return 2;
  }
  std::printf("%d of %d criteria failed\n", failures, ran);
  return failures == 0 ? 0 : 1;
}
