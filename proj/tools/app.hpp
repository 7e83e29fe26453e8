#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kadic::app {

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kUsage = 2,
};

/// Runs the command line `args` (args[0] is the program name) and returns the
/// process exit code. Data goes to files or `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kadic::app
