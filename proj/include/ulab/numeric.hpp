#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ulab {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", "-p/q" or an integer "p". Throws ConfigError on a zero
/// denominator or malformed text.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Pairwise (tree) summation in the given order. The split points depend
/// only on the length, so results are reproducible.
template <class T>
T pairwise_sum(std::span<const T> xs) {
  constexpr std::size_t kLeaf = 16;
  if (xs.size() <= kLeaf) {
    T acc = T(0);
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <class T>
T pairwise_mean(std::span<const T> xs) {
  if (xs.empty()) return T(0);
  return pairwise_sum(xs) / T(static_cast<long long>(xs.size()));
}

template <class T>
T pairwise_mean(const std::vector<T>& xs) {
  return pairwise_mean(std::span<const T>(xs));
}

/// Counter-based generator: the n-th draw of a stream is a pure function of
/// (seed, stream, n). Uses the SplitMix64 finalizer as the mixing function.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t at(std::uint64_t counter) const {
    return mix(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t next() { return at(counter_++); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n > 0 (multiply-shift reduction).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace ulab
