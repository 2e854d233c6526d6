#include <gtest/gtest.h>

#include <random>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "ucalc/dominators.hpp"

namespace ucalc::vminus {
namespace {

Function cfg(const std::vector<std::pair<std::string, std::vector<std::string>>>& edges) {
  Function f;
  f.name = "g";
  for (const auto& [l, succ] : edges) {
    Block b;
    b.label = l;
    if (succ.empty())
      b.term = Ret{Operand::constant(0)};
    else if (succ.size() == 1)
      b.term = Br{succ[0]};
    else
      b.term = BrCond{Operand::constant(1), succ[0], succ[1]};
    f.blocks.push_back(b);
  }
  return f;
}

TEST(Dominators, Diamond) {
  DomTree d = compute_dominators(cfg({{"a", {"b", "c"}}, {"b", {"d"}}, {"c", {"d"}}, {"d", {}}}));
  EXPECT_EQ(d.idom("d"), std::optional<std::string>("a"));
  EXPECT_EQ(d.idom("a"), std::nullopt);
  EXPECT_EQ(d.children("a"), (std::vector<std::string>{"b", "c", "d"}));
  EXPECT_TRUE(d.dominates("a", "d"));
  EXPECT_FALSE(d.dominates("b", "d"));
  EXPECT_TRUE(d.dominates("d", "d"));
  EXPECT_FALSE(d.strictly_dominates("d", "d"));
}

TEST(Dominators, LoopWithExit) {
  DomTree d = compute_dominators(cfg({{"start", {"loop"}},
                                      {"loop", {"body", "fail"}},
                                      {"body", {"exit", "loop"}},
                                      {"exit", {}},
                                      {"fail", {}},
                                      {"island", {"exit"}}}));
  EXPECT_EQ(d.idom("body"), std::optional<std::string>("loop"));
  EXPECT_EQ(d.idom("fail"), std::optional<std::string>("loop"));
  EXPECT_EQ(d.idom("exit"), std::optional<std::string>("body"));
  EXPECT_FALSE(d.reachable("island"));
  EXPECT_EQ(d.blocks().size(), 5u);
}

TEST(Dominators, MatchesBruteForceOracle) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    Function f = ucalc::testing::random_cfg(rng, 8);
    DomTree d = compute_dominators(f);
    auto o = oracle::brute_dominators(f);
    for (const auto& b : f.blocks) {
      ASSERT_EQ(d.reachable(b.label), o.reachable.count(b.label) > 0);
      if (!o.reachable.count(b.label)) continue;
      EXPECT_EQ(d.idom(b.label), o.idom[b.label]);
      for (const auto& a : o.reachable) EXPECT_EQ(d.dominates(a, b.label), o.dom[b.label].count(a) > 0);
    }
  }
}

}  // namespace
}  // namespace ucalc::vminus
