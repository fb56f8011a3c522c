#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ulab {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Runs a compact version of the invariant suite; used by `ulab selftest`.
std::vector<CheckResult> run_selftest(std::uint64_t seed);
std::string selftest_to_json(const std::vector<CheckResult>& results);

}  // namespace ulab
