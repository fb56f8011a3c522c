#include "oracles.hpp"
#include "test_util.hpp"

#include "ulab/errors.hpp"
#include "ulab/gowers.hpp"
#include "ulab/limits.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ulab;

namespace {
const FiniteAbelianGroup kZ2 = make_group({2});
const FunctionTable kAlternating(kZ2, {1.0, -1.0}, 1.0);

// Rational test function on Z_12; relative averages below were computed
// with an independent brute-force enumeration in exact arithmetic.
FunctionTable z12_table() {
  return FunctionTable(make_group({12}), {1, -1, 1, 1, 0, -1, 0.5, -1, 0, 1, -0.5, 1}, 1.0);
}
}  // namespace

TEST(Naive, Examples) {
  for (const auto& m : fixtures::corpus_groups()) {
    const auto g = make_group(m);
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(gowers_norm_naive({constant_table(g, 1.0), full_subgroup(g), k}), 1.0);
  }
  EXPECT_EQ(gowers_norm_naive({kAlternating, full_subgroup(kZ2), 1}), 0.0);
  EXPECT_EQ(gowers_norm_naive({kAlternating, full_subgroup(kZ2), 2}), 1.0);
  EXPECT_EQ(gowers_norm_naive({kAlternating, full_subgroup(kZ2), 0}), 0.0);
}

TEST(Naive, MatchesDefinitionOracle) {
  CounterRng rng(31);
  for (const auto& m : std::vector<std::vector<std::int64_t>>{{5}, {6}, {2, 2}, {4, 2}, {3, 3}}) {
    const auto g = make_group(m);
    const auto f = fixtures::random_table(g, rng);
    for (const auto& shifts : {full_subgroup(g), fixtures::random_proper_subgroup(g, rng)}) {
      std::vector<oracle::Coords> dirs;
      for (const auto& e : shifts.elements()) dirs.push_back(e.coords);
      for (int k = 1; k <= 3; ++k) {
        const double want = static_cast<double>(oracle::cube_average(g.moduli(), f.values(), dirs, k));
        EXPECT_NEAR(gowers_power_naive(f, shifts, k), want, 1e-12) << g.literal() << " k=" << k;
      }
    }
  }
}

TEST(Fast, Examples) {
  const auto z5 = make_group({5});
  for (int k = 1; k <= 5; ++k)
    EXPECT_NEAR(gowers_norm({constant_table(z5, 0.3), full_subgroup(z5), k}), 0.3, 1e-15);
  EXPECT_EQ(gowers_norm({kAlternating, full_subgroup(kZ2), 2}), 1.0);
  EXPECT_EQ(gowers_norm({kAlternating, full_subgroup(kZ2), 1}), 0.0);
  EXPECT_NEAR(gowers_norm({kAlternating, full_subgroup(kZ2), 3}), 1.0, 1e-12);
  EXPECT_EQ(gowers_norm({kAlternating, full_subgroup(kZ2), 0}), 0.0);
}

TEST(Fast, AgreesWithNaiveOnZ7) {
  CounterRng rng(32);
  const auto g = make_group({7});
  for (int i = 0; i < 5; ++i) {
    const auto f = fixtures::random_table(g, rng);
    EXPECT_NEAR(gowers_norm({f, full_subgroup(g), 3}), gowers_norm_naive({f, full_subgroup(g), 3}), 1e-9);
  }
}

TEST(Fast, ExactEnginesAgreeBitForBit) {
  CounterRng rng(33);
  for (const auto& m : std::vector<std::vector<std::int64_t>>{{6}, {2, 2, 2}, {9}}) {
    const auto g = make_group(m);
    const auto f = to_exact(fixtures::random_table(g, rng));
    for (const auto& shifts : {full_subgroup(g), fixtures::random_proper_subgroup(g, rng)})
      for (int k = 0; k <= 3; ++k) EXPECT_EQ(gowers_power_naive(f, shifts, k), gowers_power(f, shifts, k));
  }
}

TEST(Fast, ZeroDegreeIsMean) {
  const FunctionTable f(make_group({4}), {0.5, -1, 0, -1}, 1.0);
  EXPECT_DOUBLE_EQ(gowers_norm({f, full_subgroup(f.group()), 0}), -0.375);
}

TEST(Relative, Examples) {
  CounterRng rng(34);
  const auto g = make_group({10});
  const auto f = fixtures::random_table(g, rng);
  const auto full = full_subgroup(g);
  for (int k1 = 1; k1 <= 3; ++k1) {
    EXPECT_NEAR(relative_gowers_norm(f, full, full, k1), gowers_norm({f, full, k1}), 1e-12);
    // Only h = 0 contributes: the cube average of f^2 one level down.
    const double inner = gowers_power(pointwise_product(f, f), full, k1 - 1);
    EXPECT_NEAR(relative_gowers_norm(f, full, trivial_subgroup(g), k1), std::pow(inner, std::ldexp(1.0, -k1)),
                1e-12);
  }
}

TEST(Relative, FrozenZ12Values) {
  const auto f = z12_table();
  const auto g = f.group();
  const auto full = full_subgroup(g);
  const auto by3 = subgroup_closure(g, {{{3}}});
  const auto by1 = subgroup_closure(g, {{{1}}});
  const auto ex = to_exact(f);
  EXPECT_EQ(relative_gowers_power(ex, full, by3, 1), Rational(13, 32));
  EXPECT_EQ(relative_gowers_power(ex, full, by1, 1), Rational(1, 36));
  EXPECT_EQ(relative_gowers_power(ex, full, by3, 2), Rational(151, 768));
  EXPECT_EQ(relative_gowers_power(ex, full, by1, 2), Rational(1151, 13824));
  EXPECT_EQ(relative_gowers_power(ex, full, by3, 3), Rational(82243, 884736));
  EXPECT_EQ(relative_gowers_power(ex, full, by1, 3), Rational(34721, 663552));
  for (int k1 = 1; k1 <= 3; ++k1)
    EXPECT_LE(relative_gowers_norm(f, full, by1, k1), relative_gowers_norm(f, full, by3, k1) + 1e-9);
  EXPECT_NEAR(relative_gowers_power(f, full, by3, 2), 151.0 / 768.0, 1e-15);
}

TEST(Relative, Errors) {
  const auto g = make_group({6});
  const auto f = constant_table(g, 1.0);
  EXPECT_THROW(relative_gowers_norm(f, full_subgroup(g), full_subgroup(make_group({3})), 2), ConfigError);
  EXPECT_THROW(relative_gowers_norm(f, full_subgroup(g), full_subgroup(g), 0), ConfigError);
}

TEST(Fourier, Examples) {
  EXPECT_NEAR(u2_fourier(constant_table(make_group({7}), 1.0)), 1.0, 1e-15);
  EXPECT_NEAR(u2_fourier(kAlternating), 1.0, 1e-15);
  EXPECT_EQ(u2_fourier(constant_table(make_group({}), 1.0)), 1.0);
}

TEST(Fourier, MatchesFastU2AndFullDft) {
  CounterRng rng(35);
  for (const auto& m : fixtures::corpus_groups()) {
    const auto g = make_group(m);
    const auto f = fixtures::random_table(g, rng);
    EXPECT_NEAR(gowers_norm({f, full_subgroup(g), 2}), u2_fourier(f), 1e-9) << g.literal();
    EXPECT_NEAR(std::pow(u2_fourier(f), 4), oracle::fourier_fourth_moment(g.moduli(), f.values()), 1e-12);
  }
  const auto z8 = make_group({8});
  const auto f8 = fixtures::random_table(z8, rng);
  EXPECT_NEAR(gowers_norm({f8, full_subgroup(z8), 2}), u2_fourier(f8), 1e-9);
}

TEST(Properties, MonotonicityAndScaling) {
  CounterRng rng(36);
  for (int trial = 0; trial < 60; ++trial) {
    const auto& m = fixtures::corpus_groups()[rng.below(fixtures::corpus_groups().size())];
    const auto g = make_group(m);
    const auto f = fixtures::random_table(g, rng);
    const auto full = full_subgroup(g);
    const auto h = fixtures::random_subgroup(g, rng);
    auto gens = h.generators();
    gens.push_back(g.element_at(rng.below(g.order())));
    const auto h_big = subgroup_closure(g, gens);
    for (int k = 1; k <= 3; ++k) {
      const double whole = gowers_norm({f, full, k});
      EXPECT_LE(whole, gowers_norm({f, full, k + 1}) + 1e-9);
      EXPECT_LE(whole, gowers_norm({f, h, k}) + 1e-9);
      EXPECT_LE(relative_gowers_norm(f, full, h_big, k), relative_gowers_norm(f, full, h, k) + 1e-9);
      EXPECT_GE(relative_gowers_norm(f, full, h, k), whole - 1e-9);
      EXPECT_NEAR(gowers_norm({pointwise_scale(f, Rational(-5, 7)), h, k}), 5.0 / 7.0 * gowers_norm({f, h, k}),
                  1e-9);
    }
  }
}

TEST(Clamping, TinyNegativesClampLargeOnesThrow) {
  EXPECT_EQ(power_to_norm(-1e-12, 2), 0.0);
  EXPECT_THROW(power_to_norm(-1e-6, 2), ConsistencyError);
  EXPECT_EQ(power_to_norm(-0.5, 0), -0.5);
  EXPECT_DOUBLE_EQ(power_to_norm(0.0625, 2), 0.5);
}

TEST(Limits, KAndBudget) {
  const auto g = make_group({8});
  const auto f = constant_table(g, 1.0);
  EXPECT_THROW(gowers_norm({f, full_subgroup(g), 6}), ConfigError);
  EXPECT_THROW(gowers_norm({f, full_subgroup(g), -1}), ConfigError);
  EXPECT_THROW(gowers_norm({f, full_subgroup(make_group({4})), 2}), ConfigError);
  Limits l = limits();
  l.op_budget = 1000;
  ScopedLimits scoped(l);
  EXPECT_THROW(gowers_norm_naive({f, full_subgroup(g), 3}), BudgetError);  // 8 * 8^3 * 8
  EXPECT_NO_THROW(gowers_norm({f, full_subgroup(g), 3}));                 // 8 * 8^2
  EXPECT_THROW(gowers_norm({f, full_subgroup(g), 5}), BudgetError);
}

TEST(Determinism, ThreadCountDoesNotChangeBits) {
  CounterRng rng(37);
  const auto g = make_group({24});
  const auto f = fixtures::random_table(g, rng);
  const auto full = full_subgroup(g);
  const auto half = subgroup_closure(g, {{{2}}});
  double serial3 = 0, serial_rel = 0;
  {
    Limits l = limits();
    l.threads = 1;
    ScopedLimits s(l);
    serial3 = gowers_power(f, full, 3);
    serial_rel = relative_gowers_power(f, full, half, 3);
  }
  for (unsigned t : {2u, 3u, 8u}) {
    Limits l = limits();
    l.threads = t;
    ScopedLimits s(l);
    EXPECT_EQ(gowers_power(f, full, 3), serial3);
    EXPECT_EQ(relative_gowers_power(f, full, half, 3), serial_rel);
  }
}
