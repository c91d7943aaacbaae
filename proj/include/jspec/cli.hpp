#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jspec::cli {

// Stable process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kBoundViolated = 1,
  kUsage = 2,
  kIoFailure = 3,
  kHypothesisFailure = 4,
  kCapacityExceeded = 5,
};

// Runs the command line `args` (args[0] is the program name) and returns the
// exit code. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jspec::cli
