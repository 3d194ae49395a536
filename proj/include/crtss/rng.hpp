#pragma once

#include <cstdint>
#include <random>

namespace crtss {

/// Seedable randomness for dealers and parameter generation. Draws are
/// derived from the raw mt19937_64 stream (whose output sequence is fixed by
/// the standard) so seeded transcripts match across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng from_os_entropy();

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t uniform(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace crtss
