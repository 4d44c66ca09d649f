#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdsplit::cli {

enum ExitCode : int {
  kOk = 0,
  kSuiteFailure = 1,
  kUsage = 2,
  kNumeric = 3,
};

/// Entry point of the `pdsplit` tool; args excludes the program name.
/// Subcommands: solve, accept, sweep. Normal output goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdsplit::cli
