#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace powersched {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitMalformed = 2,
  kExitInfeasible = 3,
  kExitConvergence = 4,
};

/// Runs one CLI invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace powersched
