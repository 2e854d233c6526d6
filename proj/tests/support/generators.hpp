#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ucalc/rewrite.hpp"
#include "ucalc/term.hpp"
#include "ucalc/vminus.hpp"

namespace ucalc::testing {

struct TermGenConfig {
  int max_depth = 5;
  // Free variables the term may mention.
  std::vector<std::string> scope;
  // Percent of leaves that are (unreachable) or (err k).
  int unreachable_pct = 8;
  int error_pct = 4;
};

TermPtr random_term(std::mt19937_64& rng, const TermGenConfig& cfg);

// Closed values and small terms over `scope` for instantiating templates.
std::vector<TermPtr> template_pool(const std::vector<std::string>& scope);

// Every concrete step at every position of `e`, including templates
// instantiated from `pool`. Steps may still fail their side conditions.
std::vector<RewriteStep> candidate_steps(const TermPtr& e, const SafetyProvider& safety,
                                         const std::vector<TermPtr>& pool);

// Blocks with random branches; not necessarily valid SSA.
vminus::Function random_cfg(std::mt19937_64& rng, int max_blocks);

// A valid, well-typed SSA function with at most `max_blocks` blocks whose
// block list contains a reachable unreachable-terminated block.
vminus::Function random_ssa_function(std::mt19937_64& rng, int max_blocks);

// First reachable block ending in unreachable.
std::string first_unreachable_block(const vminus::Function& f);

}  // namespace ucalc::testing
