#pragma once

// Reference implementations that share no code with the library under test.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ucalc/term.hpp"
#include "ucalc/vminus.hpp"

namespace ucalc::oracle {

// Dominator sets by deleting each block and re-running reachability.
struct BruteDominators {
  std::set<std::string> reachable;
  std::map<std::string, std::set<std::string>> dom;  // dom[b] = blocks dominating b
  std::map<std::string, std::optional<std::string>> idom;
};
BruteDominators brute_dominators(const vminus::Function& f);

// Every path p such that the hole of an evaluation context sits at p and
// the subterm there is a redex (or a nested error/unreachable).
std::vector<Path> redex_positions(const TermPtr& e);

// Smallest x >= 0 with x * x >= n, for n >= 0.
long long ceil_sqrt(long long n);

}  // namespace ucalc::oracle
