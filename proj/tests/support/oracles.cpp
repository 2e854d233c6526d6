#include "oracles.hpp"

#include <functional>

namespace ucalc::oracle {

namespace {

std::set<std::string> reach_without(const vminus::Function& f, const std::string& removed) {
  std::set<std::string> seen;
  if (f.entry().label == removed) return seen;
  std::vector<std::string> work = {f.entry().label};
  seen.insert(f.entry().label);
  while (!work.empty()) {
    std::string l = work.back();
    work.pop_back();
    for (const auto& s : vminus::successors(*f.find(l)))
      if (s != removed && seen.insert(s).second) work.push_back(s);
  }
  return seen;
}

bool plain_value(const TermPtr& e) { return e->is(TermKind::Lit) || e->is(TermKind::Lam); }

}  // namespace

BruteDominators brute_dominators(const vminus::Function& f) {
  BruteDominators out;
  out.reachable = reach_without(f, "");
  for (const auto& b : out.reachable) out.dom[b].insert(b);
  for (const auto& d : out.reachable) {
    auto r = reach_without(f, d);
    for (const auto& b : out.reachable)
      if (b != d && !r.count(b)) out.dom[b].insert(d);
  }
  // The immediate dominator is the strict dominator dominated by all others.
  for (const auto& b : out.reachable) {
    out.idom[b] = std::nullopt;
    for (const auto& cand : out.dom[b]) {
      if (cand == b) continue;
      bool closest = true;
      for (const auto& other : out.dom[b])
        if (other != b && !out.dom[cand].count(other)) closest = false;
      if (closest) out.idom[b] = cand;
    }
  }
  return out;
}

std::vector<Path> redex_positions(const TermPtr& e) {
  std::vector<Path> out;
  Path p;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
    bool is_redex = false;
    switch (t->kind()) {
      case TermKind::App:
      case TermKind::BinOp: is_redex = plain_value(t->child(0)) && plain_value(t->child(1)); break;
      case TermKind::If:
      case TermKind::Seq: is_redex = plain_value(t->child(0)); break;
      case TermKind::Err:
      case TermKind::Unreachable: is_redex = !p.empty(); break;
      default: break;
    }
    if (is_redex) out.push_back(p);
    // Descend into every child that an evaluation context may reach.
    std::vector<std::uint32_t> holes;
    switch (t->kind()) {
      case TermKind::App:
      case TermKind::BinOp:
        holes.push_back(0);
        if (plain_value(t->child(0))) holes.push_back(1);
        break;
      case TermKind::If:
      case TermKind::Seq: holes.push_back(0); break;
      default: break;
    }
    for (auto i : holes) {
      p.push_back(i);
      walk(t->child(i));
      p.pop_back();
    }
  };
  walk(e);
  return out;
}

long long ceil_sqrt(long long n) {
  long long x = 0;
  while (x * x < n) ++x;
  return x;
}

}  // namespace ucalc::oracle
