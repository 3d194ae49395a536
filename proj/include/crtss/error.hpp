#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crtss {

enum class Errc {
  invalid_argument,
  field_mismatch,
  division_by_zero,
  not_coprime,
  not_pairwise_coprime,
  insufficient_irreducibles,
  invalid_params,
  unauthorized_subset,
  inconsistent_shares,
  missing_bulletin_entry,
  attack_not_applicable,
  budget_exceeded,
  no_solution,
  parse_error,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised before an exhaustive enumeration starts; carries the exact size of
// the space that would have been walked.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t states, std::uint64_t budget);

  std::uint64_t state_count() const noexcept { return states_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t states_;
  std::uint64_t budget_;
};

}  // namespace crtss
