#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace greenkernel {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitScope = 2,
  kExitCheckFailed = 3,
  kExitInternal = 4,
};

/// Runs one command line (without the program name) and returns its exit code.
///
/// Results go to `out` (or to --out), diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace greenkernel
