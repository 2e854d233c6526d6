#include <gtest/gtest.h>

#include <random>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "ucalc/eval.hpp"
#include "ucalc/syntax.hpp"

namespace ucalc {
namespace {

std::string run(std::string_view s, std::uint64_t fuel = 10000) { return eval(parse_term(s), Fuel{fuel}).to_string(); }

TEST(Eval, Conditionals) {
  EXPECT_EQ(run("(if false 1 2)"), "value 2");
  EXPECT_EQ(run("(if 0 1 2)"), "value 1");
  EXPECT_EQ(run("(if (lambda (x) x) 1 2)"), "value 1");
}

TEST(Eval, SequenceDiscardsValue) {
  TermPtr e = parse_term("(seq 5 (unreachable))");
  auto s = step(e);
  ASSERT_TRUE(s);
  EXPECT_TRUE((*s)->is(TermKind::Unreachable));
  EXPECT_EQ(eval(e).to_string(), "undef");
}

TEST(Eval, DeltaDomain) {
  EXPECT_EQ(run("(+ 2 3)"), "value 5");
  EXPECT_EQ(run("(- 2 3)"), "value -1");
  EXPECT_EQ(run("(< 2 3)"), "value true");
  EXPECT_EQ(run("(= true false)"), "value false");
  EXPECT_EQ(run("(!= true false)"), "value true");
  EXPECT_EQ(run("(= 1 true)"), "error delta");
  EXPECT_EQ(run("(< true false)"), "error delta");
  EXPECT_EQ(run("(+ (lambda (x) x) 1)"), "error delta");
  EXPECT_EQ(run("(1 2)"), "error beta");
}

TEST(Eval, AbortsDiscardTheContext) {
  EXPECT_EQ(run("(+ 1 (err boom))"), "error boom");
  EXPECT_EQ(run("(if (unreachable) (err a) (err b))"), "undef");
  EXPECT_EQ(run("((err a) (unreachable))"), "error a");
  EXPECT_EQ(run("(lambda (x) (unreachable))"), "function");
  // One step from E[unreachable] to unreachable.
  auto s = step(parse_term("(+ 1 (seq (unreachable) 2))"));
  ASSERT_TRUE(s);
  EXPECT_TRUE((*s)->is(TermKind::Unreachable));
}

TEST(Eval, StepRulesNamed) {
  auto d = decompose(parse_term("(+ (if true 1 2) 3)"));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->context.hole, (Path{0}));
  EXPECT_EQ(d->rule, StepRule::IfTrue);
  EXPECT_FALSE(decompose(parse_term("7")));
}

TEST(Eval, SourceAndOptimizedTable) {
  const char* src = "(lambda (p x) (+ 994 (if (p x) (unreachable) x)))";
  const char* opt = "(lambda (p x) (+ 994 (seq (p x) x)))";
  for (int n : {0, 7, 100}) {
    std::string ns = std::to_string(n), expect = "value " + std::to_string(994 + n);
    EXPECT_EQ(run(std::string("(") + src + " (lambda (y) false) " + ns + ")"), expect);
    EXPECT_EQ(run(std::string("(") + opt + " (lambda (y) false) " + ns + ")"), expect);
    EXPECT_EQ(run(std::string("(") + src + " (lambda (y) true) " + ns + ")"), "undef");
    EXPECT_EQ(run(std::string("(") + opt + " (lambda (y) true) " + ns + ")"), expect);
  }
}

TEST(Eval, FuelAndTimeouts) {
  const char* omega = "((lambda (f) (f f)) (lambda (f) (f f)))";
  EXPECT_EQ(run(omega, 1000), "timeout");
  Observation o = eval(parse_term("(+ (+ 1 2) 3)"));
  EXPECT_EQ(o.steps, 2u);
  EXPECT_EQ(eval(parse_term("(+ (+ 1 2) 3)"), Fuel{1}).kind, ObsKind::Timeout);
  EXPECT_EQ(eval(parse_term("(+ (+ 1 2) 3)"), Fuel{2}).to_string(), "value 6");
}

TEST(Eval, UndefIsTriState) {
  EXPECT_EQ(is_undef(parse_term("(if true (unreachable) 1)")), Tri::Yes);
  EXPECT_EQ(is_undef(parse_term("(if false (unreachable) 1)")), Tri::No);
  EXPECT_EQ(is_undef(parse_term("((lambda (f) (f f)) (lambda (f) (f f)))"), Fuel{100}), Tri::Unknown);
}

TEST(Eval, OpenTermsRejected) {
  EXPECT_THROW(eval(parse_term("(+ x 1)")), OpenTermError);
  EXPECT_THROW(step(parse_term("x")), OpenTermError);
}

TEST(Eval, AlphaStability) {
  std::mt19937_64 rng(17);
  testing::TermGenConfig cfg;
  for (int i = 0; i < 500; ++i) {
    TermPtr e = testing::random_term(rng, cfg);
    EXPECT_EQ(eval(e, Fuel{2000}), eval(canonical(e), Fuel{2000})) << print_term(e);
  }
}

TEST(Eval, DecompositionMatchesOracle) {
  std::mt19937_64 rng(29);
  testing::TermGenConfig cfg;
  for (int i = 0; i < 500; ++i) {
    TermPtr e = testing::random_term(rng, cfg);
    auto positions = oracle::redex_positions(e);
    auto d = decompose(e);
    if (is_answer(*e)) {
      EXPECT_FALSE(d);
      continue;
    }
    ASSERT_EQ(positions.size(), 1u) << print_term(e);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->context.hole, positions[0]);
    EXPECT_TRUE(same(contract(*d), *step(e)));
  }
}

}  // namespace
}  // namespace ucalc
