#pragma once

#include "ulab/function.hpp"
#include "ulab/group.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ulab {

struct RefinementStep {
  GroupElement g;
  /// Gap after adjoining g.
  double gap = 0.0;
  /// gap / (gap before the step); absent when the previous gap was 0.
  std::optional<double> ratio;
  std::size_t subgroup_order = 0;
};

/// Greedy growth of H so that the relative cube average with top group H
/// approaches the absolute one. gap = relative power - absolute power, both
/// measured with full-group inner shifts.
struct RefinementState {
  FunctionTable f;
  Subgroup h;
  int k1 = 2;
  double base = 0.0;
  double gap = 0.0;
  double initial_gap = 0.0;
  std::vector<RefinementStep> history;

  const FiniteAbelianGroup& group() const { return f.group(); }
};

struct RefineOptions {
  /// Candidates are exhaustive over S \ H up to this group order, sampled above.
  std::size_t exhaustive_limit = 4096;
  std::size_t sample_size = 256;
  std::uint64_t seed = 0;
  /// Resolve near-ties exactly in rational arithmetic when the group is small.
  bool exact_ties = true;
};

inline constexpr double kDefaultGapTolerance = 1e-6;

RefinementState make_refinement_state(const FunctionTable& f, const Subgroup& h0, int k1);

/// Adjoins the candidate g minimizing the next gap (canonical order breaks
/// ties). Throws ConfigError when H is already the whole group.
std::pair<GroupElement, RefinementState> refine_step(const RefinementState& state,
                                                     const RefineOptions& options = {});

/// Steps until gap <= target_gap or H is the whole group.
RefinementState refine_chain(const FunctionTable& f, const Subgroup& h0, int k1, double target_gap,
                             const RefineOptions& options = {});

/// {"steps":[{"g":[..],"gap":..,"ratio":..}], "final_gap":..} plus context fields.
std::string refinement_to_json(const RefinementState& s);

}  // namespace ulab
