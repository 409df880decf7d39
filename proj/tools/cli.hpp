#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shootout::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kDeviationsFound = 1,  // audit ran and found profitable deviations
  kBadInput = 2,
  kSolverFailure = 3,
  kIoFailure = 4,
};

/// Runs the command line `args` (args[0] is the program name) and returns
/// the exit code. All regular output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal text that parses back to exactly `x`.
std::string repr(double x);

}  // namespace shootout::cli
