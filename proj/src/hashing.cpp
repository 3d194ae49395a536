#include "crtss/hashing.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "crtss/error.hpp"

namespace crtss {

namespace {

constexpr std::string_view kContext = "crtss/h";
constexpr std::uint64_t kMaterializeLimit = 1ULL << 20;
constexpr std::uint64_t kMaxRekeys = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sha256_prefix(std::size_t level, std::uint64_t input, unsigned width,
                            unsigned bits) {
  std::vector<unsigned char> msg(kContext.begin(), kContext.end());
  for (int shift = 24; shift >= 0; shift -= 8) {
    msg.push_back(static_cast<unsigned char>((level >> shift) & 0xff));
  }
  for (int b = static_cast<int>(width) - 1; b >= 0; --b) {
    msg.push_back(static_cast<unsigned char>((input >> (8 * b)) & 0xff));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(msg.data(), msg.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::invalid_argument, "SHA-256 failed");
  }
  std::uint64_t head = 0;
  for (int j = 0; j < 8; ++j) head = (head << 8) | digest[j];
  return head >> (64 - bits);
}

}  // namespace

HashFamily::HashFamily(HashSpec spec, PrimeField field, std::size_t levels)
    : spec_(spec), field_(field), levels_(levels), bits_(field.floor_log2()) {
  if (levels == 0) throw Error(Errc::invalid_argument, "hash family needs at least one level");
  if (spec_.backend != HashBackend::table) return;

  const std::uint64_t base = splitmix64(spec_.table_seed);
  const std::uint64_t p = field_.modulus();
  const bool materialize = p <= kMaterializeLimit;
  for (std::size_t level = 1; level <= levels; ++level) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt == kMaxRekeys) {
        throw Error(Errc::invalid_argument, "cannot build " + std::to_string(levels) +
                                                " distinct hash tables over F_" + std::to_string(p));
      }
      const std::uint64_t key = splitmix64(base ^ level ^ (attempt << 32));
      if (!materialize) {
        level_keys_.push_back(key);
        break;
      }
      std::vector<std::uint64_t> table(p);
      for (std::uint64_t x = 0; x < p; ++x) table[x] = splitmix64(key ^ x) >> (64 - bits_);
      if (std::find(tables_.begin(), tables_.end(), table) != tables_.end()) continue;
      level_keys_.push_back(key);
      tables_.push_back(std::move(table));
      break;
    }
  }
}

std::uint64_t HashFamily::h(std::size_t level, std::uint64_t input) const {
  if (level < 1 || level > levels_) {
    throw Error(Errc::invalid_argument, "hash level " + std::to_string(level) +
                                            " outside [1, " + std::to_string(levels_) + "]");
  }
  input = field_.reduce(input);
  switch (spec_.backend) {
    case HashBackend::crypto:
      return sha256_prefix(level, input, field_.byte_width(), bits_);
    case HashBackend::table:
      if (!tables_.empty()) return tables_[level - 1][input];
      return splitmix64(level_keys_[level - 1] ^ input) >> (64 - bits_);
  }
  return 0;
}

Poly HashFamily::hash_poly(std::size_t level, std::span<const std::uint64_t> coeffs) const {
  if (coeffs.empty()) throw Error(Errc::invalid_argument, "cannot hash an empty share");
  std::vector<std::uint64_t> out;
  out.reserve(coeffs.size());
  for (auto c : coeffs) out.push_back(h(level, c));
  return Poly(field_, std::move(out));
}

}  // namespace crtss
