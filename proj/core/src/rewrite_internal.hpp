#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucalc/rewrite.hpp"

namespace ucalc::detail {

struct Outcome {
  TermPtr term;
  RewriteError::Kind kind = RewriteError::Kind::NonMatching;
  std::string msg;

  explicit operator bool() const { return term != nullptr; }
};

// Positions below `s` reachable through extended evaluation-context frames.
std::vector<Path> eplus_spine(const TermPtr& s);
std::vector<Path> eplus_holes(const TermPtr& s, TermKind want);

Outcome forward(Rule rule, const TermPtr& s, const std::optional<Path>& hole, const SafetyProvider& safety);
Outcome backward(Rule rule, const TermPtr& s, const std::optional<TermPtr>& param, const VarSet& ambient,
                 const SafetyProvider& safety);

}  // namespace ucalc::detail
