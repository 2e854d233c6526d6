#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ucalc/vminus.hpp"

namespace ucalc::vminus {

// Dominator tree over the blocks reachable from the entry.
class DomTree {
 public:
  const std::string& entry() const { return entry_; }
  bool reachable(const std::string& l) const { return index_.count(l) > 0; }
  // nullopt for the entry and for unreachable blocks.
  std::optional<std::string> idom(const std::string& l) const;
  // Children in function block order.
  const std::vector<std::string>& children(const std::string& l) const;
  bool dominates(const std::string& a, const std::string& b) const;
  bool strictly_dominates(const std::string& a, const std::string& b) const;
  // Reachable blocks in function block order.
  const std::vector<std::string>& blocks() const { return blocks_; }

 private:
  friend DomTree compute_dominators(const Function& f);

  std::string entry_;
  std::vector<std::string> blocks_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::string> idom_;
  std::map<std::string, std::vector<std::string>> children_;
};

// Lengauer-Tarjan with path compression.
DomTree compute_dominators(const Function& f);

}  // namespace ucalc::vminus
