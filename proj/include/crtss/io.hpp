#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "crtss/params.hpp"
#include "crtss/scheme.hpp"

namespace crtss::io {

// JSON file formats. Integers that can exceed 2^53 (p, coefficients, the
// table seed) are decimal strings; coefficient arrays ascend by power.

inline constexpr int kFormatVersion = 1;

enum class SchemeKind { dhss, yang };

const char* to_string(SchemeKind kind) noexcept;

struct ParamBundle {
  AccessStructure structure;
  PublicParams params;
};

struct ShareFile {
  SchemeKind scheme = SchemeKind::dhss;
  Share share;
};

struct BulletinFile {
  SchemeKind scheme = SchemeKind::dhss;
  Bulletin bulletin;
};

std::string serialize_params(const AccessStructure& structure, const PublicParams& params);
/// Throws Error(parse_error) on malformed input, Error(invalid_params) when
/// the parameters fail validate_params.
ParamBundle parse_params(const std::string& text);

std::string serialize_share(const ShareFile& file);
/// Checks the coefficient count against d_i and each value against p.
ShareFile parse_share(const std::string& text, const ParamBundle& bundle);

std::string serialize_bulletin(const BulletinFile& file, const PublicParams& params);
/// Checks the index set against the scheme's published set exactly.
BulletinFile parse_bulletin(const std::string& text, const ParamBundle& bundle);

/// Published (level, participant) keys for a scheme.
std::vector<Bulletin::Key> published_keys(SchemeKind scheme, const AccessStructure& structure);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace crtss::io
