#include "crtss/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "crtss/error.hpp"
#include "crtss/hashing.hpp"
#include "crtss/io.hpp"
#include "crtss/oracle.hpp"
#include "crtss/params.hpp"
#include "crtss/scheme.hpp"
#include "crtss/yang.hpp"

namespace crtss::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  bool allow_os_entropy = false;
  std::string params_path;
  std::string out;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_integer(const std::string& token) {
  int base = 10;
  std::string digits = token;
  if (token.size() > 2 && token[0] == '0' && (token[1] == 'x' || token[1] == 'X')) {
    base = 16;
    digits = token.substr(2);
  }
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    if (digits.empty() || digits[0] == '-' || digits[0] == '+') throw std::invalid_argument("sign");
    value = std::stoull(digits, &used, base);
  } catch (const std::exception&) {
    throw UsageError("'" + token + "' is not a non-negative integer");
  }
  if (used != digits.size()) throw UsageError("'" + token + "' is not a non-negative integer");
  return value;
}

std::vector<std::string> split(const std::string& text) {
  std::string normalized = text;
  for (auto& ch : normalized) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(normalized);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(text)) out.push_back(parse_integer(tok));
  return out;
}

// "1x7", "1,1,2" or "1x3,2x4".
std::vector<std::size_t> parse_degrees(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(text)) {
    const auto x = tok.find('x');
    if (x == std::string::npos || tok.rfind("0x", 0) == 0) {
      out.push_back(parse_integer(tok));
      continue;
    }
    const auto degree = parse_integer(tok.substr(0, x));
    const auto repeat = parse_integer(tok.substr(x + 1));
    out.insert(out.end(), repeat, degree);
  }
  return out;
}

Rng make_rng(const Globals& g) {
  if (g.seed) return Rng(*g.seed);
  if (g.allow_os_entropy) return Rng::from_os_entropy();
  throw UsageError("--seed is required (or pass --allow-os-entropy)");
}

io::ParamBundle load_params(const Globals& g) {
  if (g.params_path.empty()) throw UsageError("--params is required");
  return io::parse_params(io::read_file(g.params_path));
}

std::string format_secret(const Secret& s) {
  std::string out;
  for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
    if (j) out += ' ';
    out += std::to_string(s.coeffs[j]);
  }
  return out;
}

std::string format_set(const std::vector<std::size_t>& members) {
  std::string out = "{";
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(members[j]);
  }
  return out + "}";
}

int cmd_gen_params(const Globals& g, const std::string& levels, const std::string& thresholds,
                   const std::string& degrees, std::uint64_t p, std::size_t d0,
                   const std::string& backend, std::optional<std::uint64_t> table_seed,
                   std::ostream& out, std::ostream& err) {
  AccessStructure structure{parse_list(levels), parse_list(thresholds)};
  const auto profile = parse_degrees(degrees);
  auto report = validate_structure(structure);
  if (report.ok()) report = validate_degree_profile(structure, d0, profile);
  if (!report.ok()) {
    err << "invalid parameters:\n" << report.summary();
    return kUsage;
  }
  if (!is_prime(p)) throw UsageError("p = " + std::to_string(p) + " is not prime");
  HashSpec hash;
  if (backend == "table") {
    hash.backend = HashBackend::table;
    if (table_seed) {
      hash.table_seed = *table_seed;
    } else if (g.seed) {
      hash.table_seed = *g.seed;
    } else {
      throw UsageError("--table-seed (or --seed) is required with --hash table");
    }
  } else if (backend != "crypto") {
    throw UsageError("--hash must be crypto or table");
  }

  Rng rng = make_rng(g);
  const PrimeField field(p);
  PublicParams params{field, d0, generate_moduli(field, profile, rng), hash};
  if (auto full = validate_params(structure, params); !full.ok()) {
    err << "invalid parameters:\n" << full.summary();
    return kUsage;
  }
  const auto text = io::serialize_params(structure, params);
  if (g.out.empty()) {
    out << text;
  } else {
    io::write_file(g.out, text);
  }
  return kOk;
}

Secret parse_secret(const std::string& text, const PublicParams& params) {
  Secret secret;
  for (const auto& tok : split(text)) secret.coeffs.push_back(parse_integer(tok));
  try {
    check_secret(params, secret);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return secret;
}

int cmd_deal(const Globals& g, const std::string& secret_text, bool yang_mode,
             std::ostream& err) {
  const auto bundle = load_params(g);
  if (g.out.empty()) throw UsageError("--out directory is required");
  const auto secret = parse_secret(secret_text, bundle.params);
  Rng rng = make_rng(g);
  fs::create_directories(g.out);
  const fs::path dir(g.out);

  if (yang_mode) {
    auto dealing = yang::yang_deal(bundle.structure, bundle.params, secret, rng);
    for (const auto& s : dealing.shares) {
      io::ShareFile file{io::SchemeKind::yang,
                         Share{s.participant, bundle.structure.level_of(s.participant), s.coeffs}};
      io::write_file(dir / ("share_" + std::to_string(s.participant) + ".json"),
                     io::serialize_share(file));
    }
    io::BulletinFile masks{io::SchemeKind::yang, {}};
    for (const auto& [i, w] : dealing.pub.masks) masks.bulletin.set(2, i, w);
    io::write_file(dir / "bulletin.json", io::serialize_bulletin(masks, bundle.params));
    err << "dealt " << dealing.shares.size() << " two-level shares and "
        << dealing.pub.masks.size() << " masks to " << dir.string() << "\n";
    return kOk;
  }

  const HashFamily family(bundle.params.hash, bundle.params.field,
                          bundle.structure.level_count());
  auto dealing = deal(bundle.structure, bundle.params, family, secret, rng);
  for (const auto& s : dealing.shares) {
    io::write_file(dir / ("share_" + std::to_string(s.participant) + ".json"),
                   io::serialize_share({io::SchemeKind::dhss, s}));
  }
  io::write_file(dir / "bulletin.json",
                 io::serialize_bulletin({io::SchemeKind::dhss, dealing.bulletin}, bundle.params));
  err << "dealt " << dealing.shares.size() << " shares and " << dealing.bulletin.size()
      << " bulletin entries to " << dir.string() << "\n";
  return kOk;
}

struct LoadedShares {
  io::BulletinFile bulletin;
  std::vector<Share> shares;
};

LoadedShares load_shares(const io::ParamBundle& bundle, const std::string& bulletin_path,
                         const std::vector<std::string>& share_paths) {
  if (bulletin_path.empty()) throw UsageError("--bulletin is required");
  LoadedShares loaded{io::parse_bulletin(io::read_file(bulletin_path), bundle), {}};
  for (const auto& path : share_paths) {
    auto file = io::parse_share(io::read_file(path), bundle);
    if (file.scheme != loaded.bulletin.scheme) {
      throw UsageError(path + " belongs to scheme '" + io::to_string(file.scheme) +
                       "', bulletin is '" + io::to_string(loaded.bulletin.scheme) + "'");
    }
    loaded.shares.push_back(std::move(file.share));
  }
  return loaded;
}

yang::YangPublic yang_public(const io::ParamBundle& bundle, const Bulletin& masks) {
  yang::check_config(bundle.structure, bundle.params);
  yang::YangPublic pub{bundle.structure, bundle.params, {}};
  for (const auto& [key, w] : masks) pub.masks.emplace(key.second, w);
  return pub;
}

std::vector<yang::YangShare> to_yang(const std::vector<Share>& shares) {
  std::vector<yang::YangShare> out;
  for (const auto& s : shares) out.push_back({s.participant, s.coeffs});
  return out;
}

int cmd_reconstruct(const Globals& g, const std::string& bulletin_path,
                    const std::vector<std::string>& share_paths, std::ostream& out) {
  const auto bundle = load_params(g);
  auto loaded = load_shares(bundle, bulletin_path, share_paths);
  Secret secret;
  if (loaded.bulletin.scheme == io::SchemeKind::yang) {
    secret = yang::yang_reconstruct(yang_public(bundle, loaded.bulletin.bulletin),
                                    to_yang(loaded.shares));
  } else {
    const HashFamily family(bundle.params.hash, bundle.params.field,
                            bundle.structure.level_count());
    secret = reconstruct(bundle.structure, bundle.params, family, loaded.bulletin.bulletin,
                         loaded.shares);
  }
  out << format_secret(secret) << "\n";
  return kOk;
}

int cmd_attack_yang(const Globals& g, const std::string& bulletin_path,
                    const std::vector<std::string>& share_paths, std::ostream& out,
                    std::ostream& err) {
  const auto bundle = load_params(g);
  auto loaded = load_shares(bundle, bulletin_path, share_paths);
  if (loaded.bulletin.scheme != io::SchemeKind::yang) {
    throw UsageError("attack-yang needs files dealt with deal --yang");
  }
  std::vector<std::size_t> members;
  for (const auto& s : loaded.shares) members.push_back(s.participant);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  const bool authorized = is_authorized(bundle.structure, members);

  const auto secret =
      yang::yang_attack(yang_public(bundle, loaded.bulletin.bulletin), to_yang(loaded.shares));
  if (authorized) {
    err << "note: coalition " << format_set(members) << " is authorized\n";
  } else {
    err << "coalition " << format_set(members)
        << " is UNAUTHORIZED, yet recovered the secret from the public masks\n";
  }
  out << format_secret(secret) << "\n";
  return kOk;
}

int cmd_analyze(const Globals& g, const std::string& coalition_text, const std::string& mode_text,
                std::uint64_t budget_states, const std::string& bulletin_path,
                const std::vector<std::string>& share_paths, unsigned workers,
                std::ostream& out, std::ostream& err) {
  const auto bundle = load_params(g);
  const auto& structure = bundle.structure;
  const auto& params = bundle.params;
  oracle::ViewMode mode;
  try {
    mode = oracle::parse_view_mode(mode_text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::vector<std::size_t> coalition;
  if (!coalition_text.empty()) coalition = parse_list(coalition_text);
  std::sort(coalition.begin(), coalition.end());
  coalition.erase(std::unique(coalition.begin(), coalition.end()), coalition.end());
  for (auto i : coalition) {
    if (i < 1 || i > structure.participant_count()) {
      throw UsageError("participant " + std::to_string(i) + " out of range");
    }
  }
  if (is_authorized(structure, coalition)) {
    throw UsageError("coalition " + format_set(coalition) + " is authorized; analyze needs an unauthorized one");
  }
  if (mode == oracle::ViewMode::all_masks && params.hash.backend != HashBackend::table) {
    throw UsageError("mode i-v needs a parameter file with hash_backend \"table\"");
  }
  const oracle::EnumerationBudget budget{budget_states};
  const auto states = oracle::dealer_state_count(structure, params);
  if (states > budget.max_states) throw BudgetExceeded(states, budget.max_states);

  std::optional<oracle::CoalitionView> view;
  if (!bulletin_path.empty()) {
    auto loaded = load_shares(bundle, bulletin_path, share_paths);
    if (loaded.bulletin.scheme != io::SchemeKind::dhss) throw UsageError("analyze audits dhss files");
    std::vector<Share> mine;
    for (auto& s : loaded.shares) {
      if (std::binary_search(coalition.begin(), coalition.end(), s.participant)) {
        mine.push_back(std::move(s));
      }
    }
    if (mine.size() != coalition.size()) throw UsageError("a share file is missing for some coalition member");
    view.emplace(structure, params, std::move(mine), std::move(loaded.bulletin.bulletin), mode);
  } else {
    Rng rng = make_rng(g);
    const HashFamily family(params.hash, params.field, structure.level_count());
    const auto secret = oracle::secret_at(
        params.field, params.d0, rng.uniform(oracle::secret_space_size(params.field, params.d0)));
    auto dealing = deal(structure, params, family, secret, rng);
    view.emplace(oracle::CoalitionView::observe(structure, params, dealing, coalition, mode));
  }

  const auto p = params.field.modulus();
  const auto theta = oracle::compute_theta(structure, params, coalition);
  const auto histogram = oracle::enumerate_consistent(*view, budget, workers);
  const auto f_count = oracle::count_F(*view, budget);
  const auto expected_f = oracle::saturating_pow(p, theta + params.d0);
  const auto expected_pre = oracle::saturating_pow(p, theta);
  json preimages = json::array();
  bool preimage_ok = true;
  const auto secrets = oracle::secret_space_size(params.field, params.d0);
  for (std::uint64_t idx = 0; idx < secrets; ++idx) {
    const auto c = oracle::count_preimage(*view, oracle::secret_at(params.field, params.d0, idx), budget);
    preimage_ok = preimage_ok && c == expected_pre;
    preimages.push_back(c);
  }
  const double delta = oracle::loss_entropy(histogram, params.field, params.d0);

  json report;
  report["format_version"] = io::kFormatVersion;
  report["p"] = std::to_string(p);
  report["d0"] = params.d0;
  report["coalition"] = coalition;
  report["mode"] = oracle::to_string(mode);
  report["dealer_states"] = histogram.states;
  report["theta"] = theta;
  report["count_F"] = f_count;
  report["expected_count_F"] = expected_f;
  report["count_preimage"] = std::move(preimages);
  report["expected_count_preimage"] = expected_pre;
  report["preimage_count_check"] = preimage_ok ? "pass" : "fail";
  report["count_F_check"] = f_count == expected_f ? "pass" : "fail";
  report["histogram"] = histogram.counts;
  report["verdict"] = histogram.uniform() ? "uniform" : "non-uniform";
  report["loss_entropy_bits"] = delta;
  json notes = json::array();
  if (structure.level_count() == 2 && structure.level_sizes[0] < structure.threshold(2)) {
    notes.push_back(
        "two-level masked scheme on this structure: the mask attack needs n_1 >= t_2 and does not "
        "apply, but its masks still constrain f_2 - f_1, so that scheme is not perfect here");
  }
  report["notes"] = std::move(notes);

  const auto text = report.dump(2) + "\n";
  if (g.out.empty()) {
    out << text;
  } else {
    io::write_file(g.out, text);
  }
  err << "theta=" << theta << " |F|=" << f_count << " verdict="
      << (histogram.uniform() ? "uniform" : "non-uniform") << " delta=" << delta << "\n";
  return kOk;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::insufficient_irreducibles: return kInsufficientIrreducibles;
    case Errc::unauthorized_subset: return kUnauthorized;
    case Errc::inconsistent_shares:
    case Errc::not_pairwise_coprime:
    case Errc::no_solution: return kInconsistentShares;
    case Errc::attack_not_applicable: return kAttackNotApplicable;
    case Errc::budget_exceeded: return kBudgetExceeded;
    default: return kUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CRT-based disjunctive hierarchical secret sharing", "crtss"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for all randomness");
  app.add_flag("--allow-os-entropy", g.allow_os_entropy, "Use OS entropy when --seed is absent");
  app.add_option("--params", g.params_path, "Parameter file");
  app.add_option("--out", g.out, "Output file or directory");

  auto* gen = app.add_subcommand("gen-params", "Generate and validate public parameters");
  std::uint64_t p = 0;
  std::string levels, thresholds, degrees, backend = "crypto";
  std::size_t d0 = 1;
  std::optional<std::uint64_t> table_seed;
  gen->add_option("--p", p, "Prime field size")->required();
  gen->add_option("--levels", levels, "Level sizes, e.g. 3,4")->required();
  gen->add_option("--thresholds", thresholds, "Thresholds, e.g. 2,3")->required();
  gen->add_option("--degrees", degrees, "Modulus degrees, e.g. 1x7 or 1,1,2")->required();
  gen->add_option("--d0", d0, "Secret degree bound");
  gen->add_option("--hash", backend, "Hash backend: crypto or table");
  gen->add_option("--table-seed", table_seed, "Seed of the table hash backend");

  auto* dealc = app.add_subcommand("deal", "Deal shares and the bulletin to a directory");
  std::string secret_text;
  bool yang_mode = false;
  dealc->add_option("--secret", secret_text, "Secret coefficients, constant term first")->required();
  dealc->add_flag("--yang", yang_mode, "Deal with the insecure two-level scheme instead");

  auto* rec = app.add_subcommand("reconstruct", "Reconstruct the secret from share files");
  std::string bulletin_path;
  std::vector<std::string> share_paths;
  rec->add_option("--bulletin", bulletin_path, "Bulletin file")->required();
  rec->add_option("shares", share_paths, "Share files")->required();

  auto* atk = app.add_subcommand("attack-yang", "Recover a two-level secret from an unauthorized coalition");
  atk->add_option("--bulletin", bulletin_path, "Mask file from deal --yang")->required();
  atk->add_option("shares", share_paths, "Coalition share files")->required();

  auto* ana = app.add_subcommand("analyze", "Exhaustive security audit of a tiny configuration");
  std::string coalition_text, mode_text = "i-iv";
  std::uint64_t budget_states = oracle::EnumerationBudget{}.max_states;
  unsigned workers = 0;
  ana->add_option("--coalition", coalition_text, "Unauthorized coalition, e.g. 4,5")->required();
  ana->add_option("--mode", mode_text, "View mode: i-iv or i-v");
  ana->add_option("--budget", budget_states, "Maximum dealer states to enumerate");
  ana->add_option("--bulletin", bulletin_path, "Audit an existing dealing instead of dealing one");
  ana->add_option("shares", share_paths, "Coalition share files (with --bulletin)");
  ana->add_option("--workers", workers, "Enumeration threads (0 = all cores)");
  std::string report_path;
  ana->add_option("--report", report_path, "Report file (default: --out, else stdout)");

  for (auto* sub : {gen, dealc, rec, atk, ana}) sub->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen_params(g, levels, thresholds, degrees, p, d0, backend, table_seed, out, err);
    }
    if (dealc->parsed()) return cmd_deal(g, secret_text, yang_mode, err);
    if (rec->parsed()) return cmd_reconstruct(g, bulletin_path, share_paths, out);
    if (atk->parsed()) return cmd_attack_yang(g, bulletin_path, share_paths, out, err);
    if (ana->parsed()) {
      if (!report_path.empty()) g.out = report_path;
      return cmd_analyze(g, coalition_text, mode_text, budget_states, bulletin_path, share_paths,
                         workers, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.state_count() << " states (budget "
        << e.budget() << ")\n";
    return kBudgetExceeded;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}

}  // namespace crtss::cli
