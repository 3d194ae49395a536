#include "crtss/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "crtss/error.hpp"

namespace crtss::io {

using json = nlohmann::ordered_json;

namespace {

std::uint64_t parse_decimal(const json& value, const char* what) {
  if (!value.is_string()) throw Error(Errc::parse_error, std::string(what) + " must be a decimal string");
  const auto& text = value.get_ref<const std::string&>();
  if (text.empty() || text.size() > 20 ||
      !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(Errc::parse_error, std::string(what) + " '" + text + "' is not a decimal integer");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, std::string(what) + " '" + text + "' is out of range");
  }
}

json decimal_array(std::span<const std::uint64_t> values) {
  json out = json::array();
  for (auto v : values) out.push_back(std::to_string(v));
  return out;
}

std::vector<std::uint64_t> parse_coeffs(const json& array, std::uint64_t p, const char* what) {
  if (!array.is_array()) throw Error(Errc::parse_error, std::string(what) + " must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& v : array) {
    const auto c = parse_decimal(v, what);
    if (c >= p) throw Error(Errc::parse_error, std::string(what) + " value not below p");
    out.push_back(c);
  }
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

void check_header(const json& doc) {
  if (!doc.is_object() || !doc.contains("format_version") ||
      doc["format_version"] != kFormatVersion) {
    throw Error(Errc::parse_error, "unsupported or missing format_version");
  }
}

SchemeKind parse_scheme(const json& doc) {
  const auto name = doc.at("scheme").get<std::string>();
  if (name == "dhss") return SchemeKind::dhss;
  if (name == "yang") return SchemeKind::yang;
  throw Error(Errc::parse_error, "unknown scheme '" + name + "'");
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

}  // namespace

const char* to_string(SchemeKind kind) noexcept {
  return kind == SchemeKind::dhss ? "dhss" : "yang";
}

std::string serialize_params(const AccessStructure& structure, const PublicParams& params) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["p"] = std::to_string(params.field.modulus());
  doc["d0"] = params.d0;
  doc["level_sizes"] = structure.level_sizes;
  doc["thresholds"] = structure.thresholds;
  json moduli = json::array();
  for (const auto& m : params.moduli) moduli.push_back(decimal_array(m.coeffs()));
  doc["moduli"] = std::move(moduli);
  if (params.hash.backend == HashBackend::table) {
    doc["hash_backend"] = "table";
    doc["table_seed"] = std::to_string(params.hash.table_seed);
  } else {
    doc["hash_backend"] = "crypto";
  }
  return doc.dump(2) + "\n";
}

ParamBundle parse_params(const std::string& text) {
  const json doc = parse_json(text);
  check_header(doc);
  return guarded([&] {
    const std::uint64_t p = parse_decimal(doc.at("p"), "p");
    if (!is_prime(p)) throw Error(Errc::invalid_params, "p = " + std::to_string(p) + " is not prime");
    const PrimeField field(p);
    ParamBundle bundle{
        AccessStructure{doc.at("level_sizes").get<std::vector<std::size_t>>(),
                        doc.at("thresholds").get<std::vector<std::size_t>>()},
        PublicParams{field, doc.at("d0").get<std::size_t>(), {}, {}}};
    for (const auto& m : doc.at("moduli")) {
      auto coeffs = parse_coeffs(m, p, "modulus coefficient");
      if (coeffs.empty() || coeffs.back() == 0) {
        throw Error(Errc::parse_error, "modulus coefficients must end in a nonzero leading term");
      }
      bundle.params.moduli.emplace_back(field, std::move(coeffs));
    }
    const auto backend = doc.at("hash_backend").get<std::string>();
    if (backend == "table") {
      bundle.params.hash = {HashBackend::table, parse_decimal(doc.at("table_seed"), "table_seed")};
    } else if (backend != "crypto") {
      throw Error(Errc::parse_error, "unknown hash_backend '" + backend + "'");
    }
    if (auto report = validate_params(bundle.structure, bundle.params); !report.ok()) {
      throw Error(Errc::invalid_params, report.summary());
    }
    return bundle;
  });
}

std::string serialize_share(const ShareFile& file) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["scheme"] = to_string(file.scheme);
  doc["participant"] = file.share.participant;
  doc["level"] = file.share.level;
  doc["coeffs"] = decimal_array(file.share.coeffs);
  return doc.dump(2) + "\n";
}

ShareFile parse_share(const std::string& text, const ParamBundle& bundle) {
  const json doc = parse_json(text);
  check_header(doc);
  return guarded([&] {
    ShareFile file;
    file.scheme = parse_scheme(doc);
    file.share.participant = doc.at("participant").get<std::size_t>();
    file.share.level = doc.at("level").get<std::size_t>();
    const std::size_t i = file.share.participant;
    if (i < 1 || i > bundle.structure.participant_count()) {
      throw Error(Errc::parse_error, "participant " + std::to_string(i) + " out of range");
    }
    if (file.share.level != bundle.structure.level_of(i)) {
      throw Error(Errc::parse_error, "participant " + std::to_string(i) + " is not in level " +
                                         std::to_string(file.share.level));
    }
    file.share.coeffs = parse_coeffs(doc.at("coeffs"), bundle.params.field.modulus(), "share coefficient");
    if (file.share.coeffs.size() != bundle.params.degree(i)) {
      throw Error(Errc::parse_error, "share " + std::to_string(i) + " needs " +
                                         std::to_string(bundle.params.degree(i)) + " coefficients");
    }
    return file;
  });
}

std::string serialize_bulletin(const BulletinFile& file, const PublicParams& params) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["scheme"] = to_string(file.scheme);
  json entries = json::array();
  for (const auto& [key, w] : file.bulletin) {
    json e;
    e["level"] = key.first;
    e["participant"] = key.second;
    e["coeffs"] = decimal_array(w.to_vector(params.degree(key.second)));
    entries.push_back(std::move(e));
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

std::vector<Bulletin::Key> published_keys(SchemeKind scheme, const AccessStructure& structure) {
  if (scheme == SchemeKind::dhss) return bulletin_keys(structure);
  std::vector<Bulletin::Key> keys;
  for (std::size_t i = 1; i <= structure.level_sizes.at(0); ++i) keys.emplace_back(2, i);
  return keys;
}

BulletinFile parse_bulletin(const std::string& text, const ParamBundle& bundle) {
  const json doc = parse_json(text);
  check_header(doc);
  return guarded([&] {
    BulletinFile file;
    file.scheme = parse_scheme(doc);
    const auto& field = bundle.params.field;
    const std::size_t n = bundle.structure.participant_count();
    std::set<Bulletin::Key> seen;
    for (const auto& e : doc.at("entries")) {
      const auto level = e.at("level").get<std::size_t>();
      const auto i = e.at("participant").get<std::size_t>();
      if (i < 1 || i > n) throw Error(Errc::parse_error, "bulletin participant out of range");
      auto coeffs = parse_coeffs(e.at("coeffs"), field.modulus(), "bulletin coefficient");
      if (coeffs.size() != bundle.params.degree(i)) {
        throw Error(Errc::parse_error, "bulletin entry for " + std::to_string(i) +
                                           " has the wrong length");
      }
      if (!seen.emplace(level, i).second) throw Error(Errc::parse_error, "duplicate bulletin entry");
      file.bulletin.set(level, i, Poly(field, std::move(coeffs)));
    }
    const auto expected = published_keys(file.scheme, bundle.structure);
    if (std::set<Bulletin::Key>(expected.begin(), expected.end()) != seen) {
      throw Error(Errc::parse_error, "bulletin index set does not match the access structure");
    }
    return file;
  });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(Errc::invalid_argument, "write failed for " + path.string());
}

}  // namespace crtss::io
