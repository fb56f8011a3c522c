#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ulab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kBudgetRefused = 3,
};

/// Entry point of the `ulab` tool; args excludes the program name.
/// Subcommands: norm, eval, trace, refine, ap, selftest.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ulab::cli
