#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steerwork::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kXiDomain = 3,
  kUnsupported = 4,
  kVerificationFailed = 5,
};

// Parses `args` (without the program name) and runs one subcommand:
// bounds, simulate, scan, lhs-opt or verify-mub. Results go to `out` unless
// --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steerwork::cli
