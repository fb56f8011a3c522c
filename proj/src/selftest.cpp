#include "ulab/selftest.hpp"

#include "ulab/errors.hpp"
#include "ulab/expr.hpp"
#include "ulab/gowers.hpp"
#include "ulab/harness.hpp"
#include "ulab/limits.hpp"
#include "ulab/refine.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>

namespace ulab {
namespace {

FunctionTable random_table(const FiniteAbelianGroup& g, CounterRng& rng) {
  std::vector<double> v(g.order());
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return FunctionTable(g, std::move(v), 1.0);
}

Subgroup random_subgroup(const FiniteAbelianGroup& g, CounterRng& rng) {
  std::vector<GroupElement> gens;
  const auto count = rng.below(3);
  for (std::uint64_t i = 0; i < count; ++i) gens.push_back(g.element_at(rng.below(g.order())));
  return subgroup_closure(g, gens);
}

const std::vector<std::vector<std::int64_t>>& small_groups() {
  static const std::vector<std::vector<std::int64_t>> kGroups = {
      {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}, {12}, {2, 2}, {4, 2}, {2, 2, 2}, {3, 3}};
  return kGroups;
}

struct Suite {
  std::vector<CheckResult> results;
  double tol = limits().tolerance;

  void check(const std::string& name, const std::function<std::string()>& body) {
    try {
      const std::string failure = body();
      results.push_back({name, failure.empty(), failure});
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }
};

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  Suite s;
  const double tol = s.tol;

  s.check("homomorphism-law", [&]() -> std::string {
    CounterRng rng(seed, 1);
    const std::vector<QuotientMap> maps = {reduction_map(parse_ambient("Z^1"), 7),
                                           reduction_map(parse_ambient("Z^2"), 6),
                                           QuotientMap(parse_ambient("F3^4"), make_group({3, 3}))};
    for (const auto& q : maps) {
      const auto& tgt = q.target();
      for (int i = 0; i < 1000; ++i) {
        std::vector<std::int64_t> a(q.source().rank()), b(q.source().rank()), ab(q.source().rank());
        for (std::size_t c = 0; c < a.size(); ++c) {
          a[c] = static_cast<std::int64_t>(rng.below(2001)) - 1000;
          b[c] = static_cast<std::int64_t>(rng.below(2001)) - 1000;
          ab[c] = a[c] + b[c];
        }
        if (!(q.apply(ab) == tgt.add(q.apply(a), q.apply(b)))) return "map onto " + tgt.literal();
      }
    }
    return "";
  });

  s.check("lagrange-and-closure-idempotence", [&]() -> std::string {
    CounterRng rng(seed, 2);
    for (const auto& m : small_groups()) {
      const auto g = make_group(m);
      for (int i = 0; i < 10; ++i) {
        const auto h = random_subgroup(g, rng);
        if (g.order() % h.order() != 0) return "Lagrange fails in " + g.literal();
        if (!(subgroup_closure(g, h.elements()) == h)) return "closure not idempotent in " + g.literal();
      }
    }
    return "";
  });

  s.check("shift-action-and-mean", [&]() -> std::string {
    CounterRng rng(seed, 3);
    for (const auto& m : small_groups()) {
      const auto g = make_group(m);
      const auto f = random_table(g, rng);
      const auto a = g.element_at(rng.below(g.order()));
      const auto b = g.element_at(rng.below(g.order()));
      if (shift(shift(f, a), b).values() != shift(f, g.add(a, b)).values()) return "action law in " + g.literal();
      if (std::abs(mean(shift(f, a)) - mean(f)) > 1e-12) return "mean drift in " + g.literal();
    }
    return "";
  });

  s.check("coset-average", [&]() -> std::string {
    CounterRng rng(seed, 4);
    for (const auto& m : small_groups()) {
      const auto g = make_group(m);
      const auto f = random_table(g, rng);
      const auto h = random_subgroup(g, rng);
      const auto once = coset_average(f, h);
      const auto twice = coset_average(once, h);
      for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(once[i] - twice[i]) > 1e-12) return "not idempotent in " + g.literal();
      for (auto hi : h.indices()) {
        const auto moved = shift_index(once, hi);
        for (std::size_t i = 0; i < f.size(); ++i)
          if (std::abs(moved[i] - once[i]) > 1e-12) return "not H-invariant in " + g.literal();
      }
    }
    return "";
  });

  s.check("expression-evaluation", [&]() -> std::string {
    CounterRng rng(seed, 5);
    const auto ambient = parse_ambient("Z^1");
    for (int i = 0; i < 200; ++i) {
      const auto n = static_cast<std::int64_t>(rng.below(12)) + 2;
      const auto q = reduction_map(ambient, n);
      const auto f = random_table(q.target(), rng);
      const auto e = random_expr(rng, 4, 1);
      if (!(parse_expr(format_expr(e)) == e)) return "format/parse round trip: " + format_expr(e);
      const auto v = evaluate(e, f, q);
      const double bound = to_double(sup_bound(e));
      for (double x : v.values())
        if (std::abs(x) > bound * (1 + 1e-12)) return "bound violated by " + format_expr(e);
      const std::vector<std::int64_t> h{static_cast<std::int64_t>(rng.below(40)) - 20};
      const auto shifted = evaluate(Expr::shift(h, e), f, q);
      if (shifted.values() != shift(v, quotient_apply(q, h)).values()) return "shift commutation";
    }
    return "";
  });

  s.check("oracle-equivalence", [&]() -> std::string {
    CounterRng rng(seed, 6);
    for (const auto& m : small_groups()) {
      const auto g = make_group(m);
      for (int trial = 0; trial < 3; ++trial) {
        const auto f = random_table(g, rng);
        for (const auto& k_shifts : {full_subgroup(g), random_subgroup(g, rng)}) {
          for (int k = 1; k <= 3; ++k) {
            const double a = gowers_norm_naive({f, k_shifts, k});
            const double b = gowers_norm({f, k_shifts, k});
            if (std::abs(a - b) > tol) return "naive/fast differ on " + g.literal();
          }
        }
        if (std::abs(gowers_norm({f, full_subgroup(g), 2}) - u2_fourier(f)) > tol)
          return "Fourier identity fails on " + g.literal();
      }
    }
    return "";
  });

  s.check("norm-inequalities", [&]() -> std::string {
    CounterRng rng(seed, 7);
    for (const auto& m : small_groups()) {
      const auto g = make_group(m);
      const auto full = full_subgroup(g);
      for (int trial = 0; trial < 3; ++trial) {
        const auto f = random_table(g, rng);
        const auto h = random_subgroup(g, rng);
        const auto h2 = subgroup_closure(g, [&] {
          auto gens = h.generators();
          gens.push_back(g.element_at(rng.below(g.order())));
          return gens;
        }());
        for (int k = 1; k <= 3; ++k) {
          const double whole = gowers_norm({f, full, k});
          if (whole > gowers_norm({f, h, k}) + tol) return "subgroup monotonicity on " + g.literal();
          if (whole > gowers_norm({f, full, k + 1}) + tol) return "k monotonicity on " + g.literal();
          const double rel_h = relative_gowers_norm(f, full, h, k);
          const double rel_h2 = relative_gowers_norm(f, full, h2, k);
          if (rel_h2 > rel_h + tol) return "relative monotonicity on " + g.literal();
          if (rel_h < whole - tol) return "relative below absolute on " + g.literal();
          const auto scaled = pointwise_scale(f, Rational(-3, 4));
          if (std::abs(gowers_norm({scaled, full, k}) - 0.75 * whole) > tol) return "scaling on " + g.literal();
        }
      }
    }
    return "";
  });

  s.check("exact-values", [&]() -> std::string {
    const auto z2 = make_group({2});
    const FunctionTable alt(z2, {1.0, -1.0}, 1.0);
    const auto full = full_subgroup(z2);
    if (gowers_norm({alt, full, 1}) != 0.0) return "U1 of [1,-1]";
    if (std::abs(gowers_norm({alt, full, 2}) - 1.0) > 1e-12) return "U2 of [1,-1]";
    if (std::abs(gowers_norm({alt, full, 3}) - 1.0) > 1e-12) return "U3 of [1,-1]";
    for (const auto& m : small_groups()) {
      const auto g = make_group(m);
      for (int k = 1; k <= 4; ++k)
        if (gowers_norm({constant_table(g, 1.0), full_subgroup(g), k}) != 1.0) return "constant 1 on " + g.literal();
    }
    return "";
  });

  s.check("exact-mode-agreement", [&]() -> std::string {
    CounterRng rng(seed, 8);
    const auto g = make_group({6});
    const auto f = random_table(g, rng);
    const auto ex = to_exact(f);
    for (int k = 1; k <= 3; ++k) {
      const Rational naive = gowers_power_naive(ex, full_subgroup(g), k);
      if (naive != gowers_power(ex, full_subgroup(g), k)) return "exact engines disagree";
      if (std::abs(to_double(naive) - gowers_power(f, full_subgroup(g), k)) > 1e-12) return "float drift";
    }
    return "";
  });

  s.check("refinement-descent", [&]() -> std::string {
    for (std::uint64_t i = 0; i < 5; ++i) {
      const auto g = make_group({16});
      const auto f = FunctionFamily::parse("random_sign", seed + i).realize(g);
      const auto st = refine_chain(f, trivial_subgroup(g), 2, kDefaultGapTolerance);
      double prev = st.initial_gap;
      for (const auto& step : st.history) {
        if (step.gap > prev + tol) return "gap increased";
        prev = step.gap;
      }
      if (st.history.size() > 4) return "too many steps";
      if (!(st.gap <= kDefaultGapTolerance || st.h.is_full())) return "did not converge";
    }
    return "";
  });

  s.check("von-neumann", [&]() -> std::string {
    CounterRng rng(seed, 9);
    const auto g = make_group({7});
    for (int i = 0; i < 20; ++i) {
      const auto r = vonneumann_check(random_table(g, rng), 3);
      if (!r.ok) return "bound violated";
    }
    return "";
  });

  return s.results;
}

std::string selftest_to_json(const std::vector<CheckResult>& results) {
  nlohmann::ordered_json j;
  std::size_t passed = 0;
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    passed += r.ok ? 1 : 0;
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["ok"] = r.ok;
    if (!r.ok) c["detail"] = r.detail;
    checks.push_back(c);
  }
  j["passed"] = passed;
  j["failed"] = results.size() - passed;
  return j.dump();
}

}  // namespace ulab
