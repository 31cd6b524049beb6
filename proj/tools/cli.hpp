#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace minkres::cli {

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,
  kMalformed = 2,
  kConflict = 3,
  kBudgetExhausted = 4,
  kNoSolution = 5,
};

inline constexpr unsigned long long kDefaultSeed = 20240607;

/// Runs one command; JSON goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace minkres::cli
