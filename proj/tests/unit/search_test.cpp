#include <gtest/gtest.h>

#include "ucalc/rewrite.hpp"
#include "ucalc/syntax.hpp"

namespace ucalc {
namespace {

TermPtr P(std::string_view s) { return parse_term(s); }

std::optional<RewriteTrace> find(std::string_view from, std::string_view to,
                                 const SafetyProvider& safety = syntactic_safety(), SearchBounds b = {}) {
  auto t = search_equiv(P(from), P(to), b, safety);
  if (t) {
    EXPECT_TRUE(alpha_eq(apply_trace(P(from), *t, safety), P(to)));
  }
  return t;
}

TEST(Search, DistanceIsZeroExactlyOnAlphaEquals) {
  EXPECT_EQ(term_distance(P("(lambda (x) x)"), P("(lambda (y) y)")), 0u);
  EXPECT_GT(term_distance(P("(+ 1 2)"), P("(+ 1 3)")), 0u);
  EXPECT_GT(term_distance(P("(+ 1 2)"), P("(seq 1 2)")), term_distance(P("(+ 1 2)"), P("(+ 1 3)")));
}

TEST(Search, IdentityNeedsNoSteps) {
  auto t = find("(f 1)", "(f 1)");
  ASSERT_TRUE(t);
  EXPECT_TRUE(t->empty());
}

TEST(Search, SingleDeadBranchStep) {
  auto t = find("(if e1 e2 (unreachable))", "(seq e1 e2)");
  ASSERT_TRUE(t);
  EXPECT_EQ(format_trace(*t), "U1 fwd .\n");
}

TEST(Search, GuardedIncrementNeedsTwoU2Steps) {
  const char* src =
      "(< x (if (< 2147483647 (+ x 1)) (unreachable) (if (< (+ x 1) -2147483648) (unreachable) (+ x 1))))";
  const char* mid = "(< x (seq (< 2147483647 (+ x 1)) (seq (< (+ x 1) -2147483648) (+ x 1))))";
  auto t = find(src, mid);
  ASSERT_TRUE(t);
  ASSERT_EQ(t->size(), 2u);
  for (const auto& s : *t) EXPECT_EQ(s.rule, Rule::U2);
  auto drops = find(mid, "(< x (+ x 1))", integer_safety());
  ASSERT_TRUE(drops);
  for (const auto& s : *drops) EXPECT_EQ(s.rule, Rule::M4);
  EXPECT_FALSE(find(mid, "(< x (+ x 1))", syntactic_safety()));
}

TEST(Search, UsesBackwardStepsFromTheTarget) {
  auto t = find("3", "(seq 1 3)");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->front().dir, Direction::Backward);
}

TEST(Search, RespectsDepth) {
  SearchBounds shallow;
  shallow.depth = 1;
  EXPECT_FALSE(find("(+ (+ 1 2) (+ 3 4))", "10", syntactic_safety(), shallow));
  EXPECT_TRUE(find("(+ (+ 1 2) (+ 3 4))", "10"));
}

TEST(Search, NoWitnessBetweenDifferentValues) {
  SearchBounds b;
  b.depth = 3;
  b.max_expansions = 200;
  EXPECT_FALSE(find("1", "2", syntactic_safety(), b));
}

}  // namespace
}  // namespace ucalc
