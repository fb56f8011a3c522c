#include "test_util.hpp"

#include "ulab/errors.hpp"
#include "ulab/function.hpp"

#include <gtest/gtest.h>

using namespace ulab;

namespace {
const FiniteAbelianGroup kZ4 = make_group({4});
}

TEST(FunctionTable, ValidatesShapeAndBound) {
  EXPECT_THROW(FunctionTable(kZ4, {1, 2, 3}, 5.0), ConfigError);
  EXPECT_THROW(FunctionTable(kZ4, {0.5, -1, 0, 2}, 1.0), ConfigError);
  EXPECT_THROW(FunctionTable(kZ4, {0.5, -1, 0, NAN}, 1.0), ConfigError);
  EXPECT_NO_THROW(FunctionTable(kZ4, {0.5, -1, 0, 1}, 1.0));
  EXPECT_EQ(make_table(kZ4, {0.5, -1, 0, 1}).bound(), 1.0);
  EXPECT_EQ(make_table(kZ4, {0.5, -3, 0, 1}).bound(), 3.0);
}

TEST(Shift, Examples) {
  const FunctionTable f(kZ4, {0.5, -1, 0, 1}, 1.0);
  EXPECT_EQ(shift(f, kZ4.zero()).values(), f.values());
  EXPECT_EQ(shift(f, {{1}}).values(), (std::vector<double>{-1, 0, 1, 0.5}));
  const auto c = constant_table(kZ4, 0.25);
  EXPECT_EQ(shift(c, {{3}}).values(), c.values());
  EXPECT_THROW(shift(f, {{4}}), ConfigError);
}

TEST(Shift, IsAGroupActionExactly) {
  CounterRng rng(1);
  for (const auto& m : fixtures::corpus_groups()) {
    const auto g = make_group(m);
    const auto f = fixtures::random_table(g, rng);
    for (int i = 0; i < 5; ++i) {
      const auto a = g.element_at(rng.below(g.order()));
      const auto b = g.element_at(rng.below(g.order()));
      EXPECT_EQ(shift(shift(f, a), b).values(), shift(f, g.add(a, b)).values());
      EXPECT_NEAR(mean(shift(f, a)), mean(f), 1e-12);
    }
  }
}

TEST(Mean, Examples) {
  EXPECT_EQ(mean(constant_table(kZ4, 1.0)), 1.0);
  EXPECT_EQ(mean(FunctionTable(make_group({2}), {1, -1}, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(mean(FunctionTable(kZ4, {0.5, -1, 0, 1}, 1.0)), 0.125);
}

TEST(CosetAverage, Examples) {
  const FunctionTable f(kZ4, {1, 0, -1, 0}, 1.0);
  EXPECT_EQ(coset_average(f, subgroup_closure(kZ4, {{{2}}})).values(), (std::vector<double>{0, 0, 0, 0}));
  EXPECT_EQ(coset_average(f, trivial_subgroup(kZ4)).values(), f.values());
  const FunctionTable g(kZ4, {0.5, -1, 0, 1}, 1.0);
  for (double v : coset_average(g, full_subgroup(kZ4)).values()) EXPECT_DOUBLE_EQ(v, 0.125);
}

TEST(CosetAverage, IdempotentInvariantMeanPreserving) {
  CounterRng rng(2);
  for (const auto& m : fixtures::corpus_groups()) {
    const auto g = make_group(m);
    const auto f = fixtures::random_table(g, rng);
    const auto h = fixtures::random_subgroup(g, rng);
    const auto once = coset_average(f, h);
    const auto twice = coset_average(once, h);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(once[i], twice[i], 1e-12);
    for (auto hi : h.indices()) {
      const auto moved = shift_index(once, hi);
      for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(moved[i], once[i], 1e-12);
    }
    EXPECT_NEAR(mean(once), mean(f), 1e-12);
  }
}

TEST(CosetAverage, RejectsForeignSubgroup) {
  EXPECT_THROW(coset_average(constant_table(kZ4, 1), full_subgroup(make_group({2}))), ConfigError);
}

TEST(Pointwise, AlgebraAndBounds) {
  CounterRng rng(3);
  const auto f = fixtures::random_table(kZ4, rng);
  const auto one = constant_table(kZ4, 1.0);
  EXPECT_EQ(pointwise_product(f, one).values(), f.values());
  for (double v : pointwise_sum(f, pointwise_scale(f, Rational(-1))).values()) EXPECT_EQ(v, 0.0);
  const auto g = pointwise_scale(f, Rational(1, 2));
  EXPECT_EQ(pointwise_product(f, g).bound(), f.bound() * g.bound());
  EXPECT_EQ(pointwise_sum(f, g).bound(), 1.5);
  EXPECT_EQ(pointwise_scale(f, Rational(-3, 4)).bound(), 0.75);
  EXPECT_THROW(pointwise_sum(f, constant_table(make_group({2, 2}), 1.0)), ConfigError);
}

TEST(ExactMode, ConvertsExactlyAndRespectsSizeLimit) {
  const FunctionTable f(kZ4, {0.1, -1, 0, 1}, 1.0);
  const auto ex = to_exact(f);
  EXPECT_EQ(ex[0], Rational(0.1));
  EXPECT_EQ(to_double(ex).values(), f.values());
  EXPECT_EQ(mean(ex) * 4, ex[0] + ex[1] + ex[2] + ex[3]);
  EXPECT_THROW(to_exact(constant_table(make_group({65}), 1.0)), ConfigError);
}

TEST(FunctionJson, RoundTripAndErrors) {
  CounterRng rng(4);
  const auto f = fixtures::random_table(make_group({3, 2}), rng);
  const auto back = function_from_json(function_to_json(f));
  EXPECT_EQ(back.values(), f.values());
  EXPECT_EQ(back.group(), f.group());
  EXPECT_EQ(back.bound(), f.bound());
  EXPECT_THROW(function_from_json(R"({"group":[2],"values":[1]})"), ConfigError);
  EXPECT_THROW(function_from_json(R"({"group":[2],"values":[1, 2],"bound":1})"), ConfigError);
  EXPECT_THROW(function_from_json("not json"), ConfigError);
}

TEST(FunctionCsv, RowsPerElement) {
  const FunctionTable f(make_group({2, 2}), {1, -1, 0.5, 0}, 1.0);
  EXPECT_EQ(function_to_csv(f), "x0,x1,value\n0,0,1\n0,1,-1\n1,0,0.5\n1,1,0\n");
}
