#pragma once

#include "ulab/function.hpp"
#include "ulab/group.hpp"
#include "ulab/numeric.hpp"

#include <vector>

namespace ulab::fixtures {

inline FunctionTable random_table(const FiniteAbelianGroup& g, CounterRng& rng) {
  std::vector<double> v(g.order());
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return FunctionTable(g, std::move(v), 1.0);
}

inline Subgroup random_subgroup(const FiniteAbelianGroup& g, CounterRng& rng, std::size_t max_gens = 2) {
  std::vector<GroupElement> gens;
  const auto count = rng.below(max_gens + 1);
  for (std::uint64_t i = 0; i < count; ++i) gens.push_back(g.element_at(rng.below(g.order())));
  return subgroup_closure(g, gens);
}

/// A random proper subgroup when one exists (trivial group excepted).
inline Subgroup random_proper_subgroup(const FiniteAbelianGroup& g, CounterRng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto h = random_subgroup(g, rng, 1);
    if (!h.is_full()) return h;
  }
  return trivial_subgroup(g);
}

inline const std::vector<std::vector<std::int64_t>>& corpus_groups() {
  static const std::vector<std::vector<std::int64_t>> kGroups = [] {
    std::vector<std::vector<std::int64_t>> g;
    for (std::int64_t n = 1; n <= 16; ++n) g.push_back({n});
    g.push_back({2, 2});
    g.push_back({4, 2});
    g.push_back({2, 2, 2});
    g.push_back({3, 3});
    return g;
  }();
  return kGroups;
}

}  // namespace ulab::fixtures
