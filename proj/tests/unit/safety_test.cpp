#include <gtest/gtest.h>

#include <random>

#include "../support/generators.hpp"
#include "ucalc/safety.hpp"
#include "ucalc/syntax.hpp"

namespace ucalc {
namespace {

Safety syn(std::string_view s) { return safe_syntactic(parse_term(s)).verdict; }

TEST(Safety, Syntactic) {
  EXPECT_EQ(syn("(+ 1 2)"), Safety::Safe);
  EXPECT_EQ(syn("x"), Safety::Safe);
  EXPECT_EQ(syn("(lambda (x) (unreachable))"), Safety::Safe);
  EXPECT_EQ(syn("(if x 1 (seq 2 y))"), Safety::Safe);
  EXPECT_EQ(syn("(+ x 1)"), Safety::Unsafe);
  EXPECT_EQ(syn("(+ 1 true)"), Safety::Unsafe);
  EXPECT_EQ(syn("(f 1)"), Safety::Unsafe);
  EXPECT_EQ(syn("(unreachable)"), Safety::Unsafe);
  EXPECT_EQ(syn("(err a)"), Safety::Unsafe);
}

TEST(Safety, IntegerModeAssumesIntegerVariables) {
  auto verdict = [](std::string_view s) { return safe_integer_mode(parse_term(s)).verdict; };
  EXPECT_EQ(verdict("(+ x 1)"), Safety::Safe);
  EXPECT_EQ(verdict("(< (+ x 1) -2147483648)"), Safety::Safe);
  EXPECT_EQ(verdict("(if (< x 3) (* x x) 0)"), Safety::Safe);
  EXPECT_EQ(verdict("(= (< x 1) true)"), Safety::Safe);
  EXPECT_EQ(verdict("(+ (< x 1) 1)"), Safety::Unsafe);
  EXPECT_EQ(verdict("(x 1)"), Safety::Unsafe);
  EXPECT_TRUE(integer_safety().is_safe(parse_term("(<= x y)")));
  EXPECT_FALSE(syntactic_safety().is_safe(parse_term("(<= x y)")));
}

TEST(Safety, OracleFindsWitness) {
  TermPtr e = parse_term("(+ x 1)");
  SafetyVerdict v = safe_oracle(e, {"x"}, 20, Fuel{1000}, 3);
  ASSERT_EQ(v.verdict, Safety::Unsafe);
  ASSERT_TRUE(v.witness);
  TermPtr closed = apply_substitution(e, *v.witness);
  Observation o = eval(closed, Fuel{1000});
  EXPECT_EQ(o, *v.witness_observation);
  EXPECT_NE(o.kind, ObsKind::Value);
  // Never claims Safe.
  EXPECT_EQ(safe_oracle(parse_term("(+ 1 2)"), {}, 20, Fuel{1000}, 3).verdict, Safety::Unknown);
  EXPECT_EQ(safe_oracle(parse_term("(+ x 1)"), {"x"}, 20, Fuel{1000}, 3, ValuePool::integers()).verdict,
            Safety::Unknown);
}

TEST(Safety, ProvidersByName) {
  EXPECT_EQ(safety_by_name("syntactic").name(), "syntactic");
  EXPECT_EQ(safety_by_name("integer").name(), "integer");
  EXPECT_THROW(safety_by_name("bogus"), std::invalid_argument);
}

// Safe terms evaluate to values under every sampled closing substitution.
TEST(Safety, SyntacticCheckerIsSound) {
  std::mt19937_64 rng(5);
  testing::TermGenConfig cfg;
  cfg.scope = {"x", "y"};
  cfg.max_depth = 4;
  ValuePool pool = ValuePool::standard();
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    TermPtr e = testing::random_term(rng, cfg);
    auto v = safe_syntactic(e);
    ASSERT_NE(v.verdict, Safety::Unknown);
    if (v.verdict != Safety::Safe) continue;
    ++checked;
    for (int k = 0; k < 20; ++k) {
      Substitution s = {{"x", pool.values[rng() % pool.values.size()]},
                        {"y", pool.values[rng() % pool.values.size()]}};
      Observation o = eval(apply_substitution(e, s), Fuel{10000});
      EXPECT_TRUE(o.kind == ObsKind::Value || o.kind == ObsKind::Function) << print_term(e);
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Safety, IntegerModeIsSoundOverIntegers) {
  std::mt19937_64 rng(6);
  testing::TermGenConfig cfg;
  cfg.scope = {"x"};
  cfg.max_depth = 4;
  for (int i = 0; i < 1000; ++i) {
    TermPtr e = testing::random_term(rng, cfg);
    if (safe_integer_mode(e).verdict != Safety::Safe) continue;
    for (int k = -3; k <= 3; ++k) {
      Observation o = eval(apply_substitution(e, {{"x", Term::integer(k)}}), Fuel{10000});
      EXPECT_TRUE(o.kind == ObsKind::Value || o.kind == ObsKind::Function) << print_term(e);
    }
  }
}

}  // namespace
}  // namespace ucalc
