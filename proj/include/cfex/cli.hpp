#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfex::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kAdapterUnreachable = 3,
  kParseError = 4,
  kOracleMismatch = 5,
};

/// Entry point for the `cfex` tool. `args` excludes the program name.
/// Machine output goes to files (or `out` for the oracle report); logs go
/// to `log`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace cfex::cli
