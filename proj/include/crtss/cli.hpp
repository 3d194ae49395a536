#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crtss::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kInsufficientIrreducibles = 3,
  kUnauthorized = 4,
  kInconsistentShares = 5,
  kAttackNotApplicable = 6,
  kBudgetExceeded = 7,
};

/// Runs one command line (args[0] is the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crtss::cli
