#include "ulab/limits.hpp"

#include <thread>

namespace ulab {
namespace {
Limits& mutable_limits() {
  static Limits l;
  return l;
}
}  // namespace

const Limits& limits() { return mutable_limits(); }
void set_limits(const Limits& l) { mutable_limits() = l; }

unsigned worker_count() {
  const unsigned t = limits().threads;
  if (t != 0) return t;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ScopedLimits::ScopedLimits(const Limits& l) : saved_(limits()) { set_limits(l); }
ScopedLimits::~ScopedLimits() { set_limits(saved_); }

}  // namespace ulab
