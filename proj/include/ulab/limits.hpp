#pragma once

#include <cstdint>

namespace ulab {

/// Process-wide resource limits. Read through limits(), changed through
/// ScopedLimits or set_limits().
struct Limits {
  std::uint64_t max_group_order = 10'000'000;
  int max_k = 5;
  /// Upper bound on the estimated elementary operations of one computation.
  double op_budget = 1e9;
  /// Absolute slack for negative-average clamping and inequality checks.
  double tolerance = 1e-9;
  /// Worker cap for parallel sections; 0 means hardware concurrency.
  unsigned threads = 0;
};

const Limits& limits();
void set_limits(const Limits& l);

/// Effective worker count (resolves threads == 0).
unsigned worker_count();

class ScopedLimits {
 public:
  explicit ScopedLimits(const Limits& l);
  ~ScopedLimits();
  ScopedLimits(const ScopedLimits&) = delete;
  ScopedLimits& operator=(const ScopedLimits&) = delete;

 private:
  Limits saved_;
};

}  // namespace ulab
