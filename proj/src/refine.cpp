#include "ulab/refine.hpp"

#include "ulab/errors.hpp"
#include "ulab/gowers.hpp"
#include "ulab/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>

namespace ulab {
namespace {

constexpr double kMonotoneSlack = 1e-9;
constexpr double kTieWidth = 1e-12;
constexpr double kExactTieBudget = 1e7;

struct Candidate {
  std::size_t g;  // element index of the first (canonical) g giving this subgroup
  Subgroup h;
  double power = 0.0;
};

std::vector<std::size_t> candidate_indices(const RefinementState& s, const RefineOptions& o, std::size_t step) {
  const auto& group = s.group();
  std::vector<std::size_t> out;
  if (group.order() <= o.exhaustive_limit) {
    for (std::size_t x = 0; x < group.order(); ++x)
      if (!s.h.contains_index(x)) out.push_back(x);
    return out;
  }
  const std::size_t outside = group.order() - s.h.order();
  const std::size_t want = std::min(o.sample_size, outside);
  CounterRng rng(o.seed, step + 1);
  std::vector<bool> taken(group.order(), false);
  while (out.size() < want) {
    const auto x = static_cast<std::size_t>(rng.below(group.order()));
    if (s.h.contains_index(x) || taken[x]) continue;
    taken[x] = true;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

RefinementState make_refinement_state(const FunctionTable& f, const Subgroup& h0, int k1) {
  if (k1 < 1) throw ConfigError("refinement needs k1 >= 1");
  if (!(h0.parent() == f.group())) throw ConfigError("initial subgroup does not belong to the function's group");
  const Subgroup full = full_subgroup(f.group());
  RefinementState s{f, h0, k1, 0.0, 0.0, 0.0, {}};
  s.base = gowers_power(f, full, k1);
  s.gap = relative_gowers_power(f, full, h0, k1) - s.base;
  if (s.gap < -kMonotoneSlack) throw ConsistencyError("relative cube average fell below the absolute one");
  s.initial_gap = s.gap;
  return s;
}

std::pair<GroupElement, RefinementState> refine_step(const RefinementState& state, const RefineOptions& options) {
  const auto& group = state.group();
  if (state.h.is_full()) throw ConfigError("subgroup is already the whole group; nothing to adjoin");

  const auto raw = candidate_indices(state, options, state.history.size());
  std::vector<Candidate> distinct;
  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (auto x : raw) {
    auto gens = state.h.generators();
    gens.push_back(group.element_at(x));
    Subgroup next = subgroup_closure(group, gens);
    if (seen.emplace(next.indices(), distinct.size()).second) distinct.push_back({x, std::move(next), 0.0});
  }

  const Subgroup full = full_subgroup(group);
  const auto powers = parallel_map(distinct.size(), [&](std::size_t i) {
    return relative_gowers_power(state.f, full, distinct[i].h, state.k1);
  });
  for (std::size_t i = 0; i < distinct.size(); ++i) distinct[i].power = powers[i];

  double best = distinct.front().power;
  for (const auto& c : distinct) best = std::min(best, c.power);
  const double width = kTieWidth * std::max(1.0, std::abs(best));
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < distinct.size(); ++i)
    if (distinct[i].power <= best + width) tied.push_back(i);

  std::size_t chosen = tied.front();
  const double exact_cost = static_cast<double>(tied.size()) * static_cast<double>(group.order()) *
                            fast_cost(group.order(), group.order(), state.k1);
  if (tied.size() > 1 && options.exact_ties && group.order() <= kExactMaxOrder && exact_cost <= kExactTieBudget) {
    const ExactTable exact = to_exact(state.f);
    std::optional<Rational> best_exact;
    for (auto i : tied) {
      Rational v = relative_gowers_power(exact, full, distinct[i].h, state.k1);
      if (!best_exact || v < *best_exact || (v == *best_exact && distinct[i].g < distinct[chosen].g)) {
        best_exact = v;
        chosen = i;
      }
    }
  } else {
    for (auto i : tied)
      if (distinct[i].g < distinct[chosen].g) chosen = i;
  }

  const Candidate& pick = distinct[chosen];
  RefinementState next = state;
  next.h = pick.h;
  next.gap = pick.power - state.base;
  if (next.gap > state.gap + kMonotoneSlack)
    throw ConsistencyError("refinement gap increased from " + format_double(state.gap) + " to " +
                           format_double(next.gap));
  RefinementStep step{group.element_at(pick.g), next.gap, std::nullopt, pick.h.order()};
  if (state.gap > 0) step.ratio = next.gap / state.gap;
  next.history.push_back(step);
  return {step.g, std::move(next)};
}

RefinementState refine_chain(const FunctionTable& f, const Subgroup& h0, int k1, double target_gap,
                             const RefineOptions& options) {
  if (!(target_gap > 0)) throw ConfigError("target gap must be positive");
  RefinementState s = make_refinement_state(f, h0, k1);
  while (s.gap > target_gap && !s.h.is_full()) s = refine_step(s, options).second;
  return s;
}

std::string refinement_to_json(const RefinementState& s) {
  nlohmann::ordered_json j;
  j["group"] = s.group().moduli();
  j["k1"] = s.k1;
  j["base"] = s.base;
  j["initial_gap"] = s.initial_gap;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& st : s.history) {
    nlohmann::ordered_json e;
    e["g"] = st.g.coords;
    e["gap"] = st.gap;
    e["ratio"] = st.ratio ? nlohmann::ordered_json(*st.ratio) : nlohmann::ordered_json(nullptr);
    e["subgroup_order"] = st.subgroup_order;
    steps.push_back(e);
  }
  j["steps"] = steps;
  j["final_gap"] = s.gap;
  j["final_subgroup_order"] = s.h.order();
  return j.dump();
}

}  // namespace ulab
