#include "ucalc/vminus.hpp"

#include <map>
#include <set>

#include "ucalc/dominators.hpp"
#include "ucalc/eval.hpp"

namespace ucalc::vminus {

const Block* Function::find(std::string_view label) const {
  for (const auto& b : blocks)
    if (b.label == label) return &b;
  return nullptr;
}

Block* Function::find(std::string_view label) {
  for (auto& b : blocks)
    if (b.label == label) return &b;
  return nullptr;
}

std::vector<std::string> successors(const Block& b) {
  if (const auto* br = std::get_if<Br>(&b.term)) return {br->target};
  if (const auto* bc = std::get_if<BrCond>(&b.term)) {
    if (bc->if_true == bc->if_false) return {bc->if_true};
    return {bc->if_true, bc->if_false};
  }
  return {};
}

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::string msg = "invalid function";
  for (const auto& i : issues) msg += "\n  " + (i.block.empty() ? std::string("<function>") : i.block) + ": " + i.message;
  return msg;
}

}  // namespace

VminusError::VminusError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<std::string> predecessors(const Function& f, std::string_view label) {
  std::vector<std::string> out;
  for (const auto& b : f.blocks)
    for (const auto& s : successors(b))
      if (s == label) {
        out.push_back(b.label);
        break;
      }
  return out;
}

std::vector<std::string> reachable_blocks(const Function& f) { return compute_dominators(f).blocks(); }

std::vector<ValidationIssue> check(const Function& f) {
  std::vector<ValidationIssue> issues;
  auto issue = [&](const std::string& block, std::string msg) { issues.push_back({block, std::move(msg)}); };
  if (f.blocks.empty()) {
    issue("", "function has no blocks");
    return issues;
  }

  std::set<std::string> labels;
  for (const auto& b : f.blocks)
    if (!labels.insert(b.label).second) issue(b.label, "duplicate block label");

  // Definition sites: block label, or empty for parameters.
  std::map<std::string, std::string> def_block;
  auto define = [&](const std::string& var, const std::string& block) {
    if (!def_block.emplace(var, block).second) issue(block, "variable " + var + " is defined more than once");
  };
  for (const auto& p : f.params) define(p, "");
  for (const auto& b : f.blocks) {
    for (const auto& p : b.phis) define(p.target, b.label);
    for (const auto& c : b.commands)
      if (const auto* a = std::get_if<Assign>(&c)) define(a->target, b.label);
  }

  for (const auto& b : f.blocks)
    for (const auto& s : successors(b)) {
      if (!labels.count(s)) issue(b.label, "branch to unknown block " + s);
      if (s == f.entry().label) issue(b.label, "the entry block cannot be a branch target");
    }
  if (!f.entry().phis.empty()) issue(f.entry().label, "the entry block cannot have phi nodes");
  if (!issues.empty()) return issues;

  DomTree dom = compute_dominators(f);

  // `var` is available at the end of `block` (or at position `pos` if set).
  auto available = [&](const std::string& var, const std::string& block, const std::set<std::string>& local) {
    auto it = def_block.find(var);
    if (it == def_block.end()) return false;
    if (it->second.empty()) return true;
    if (it->second == block) return local.count(var) > 0;
    return dom.strictly_dominates(it->second, block);
  };
  auto use = [&](const Operand& o, const std::string& block, const std::set<std::string>& local,
                 const std::string& where) {
    if (!o.is_var()) return;
    if (!def_block.count(o.name())) {
      issue(block, where + " uses undefined variable " + o.name());
      return;
    }
    if (dom.reachable(block) && !available(o.name(), block, local))
      issue(block, where + " uses " + o.name() + " before a dominating definition");
  };

  for (const auto& b : f.blocks) {
    auto preds = predecessors(f, b.label);
    std::set<std::string> pred_set(preds.begin(), preds.end());
    std::set<std::string> local;
    for (const auto& p : b.phis) local.insert(p.target);
    for (const auto& p : b.phis) {
      std::set<std::string> seen;
      for (const auto& [v, from] : p.incoming) {
        if (!pred_set.count(from)) issue(b.label, "phi " + p.target + " lists non-predecessor " + from);
        if (!seen.insert(from).second) issue(b.label, "phi " + p.target + " lists " + from + " twice");
        if (v.is_var()) {
          if (!def_block.count(v.name())) {
            issue(b.label, "phi " + p.target + " uses undefined variable " + v.name());
          } else if (dom.reachable(from)) {
            const std::string& d = def_block[v.name()];
            if (!d.empty() && d != from && !dom.strictly_dominates(d, from))
              issue(b.label, "phi " + p.target + " value " + v.name() + " does not dominate the edge from " + from);
          }
        }
      }
      for (const auto& pr : preds)
        if (!seen.count(pr)) issue(b.label, "phi " + p.target + " has no value for predecessor " + pr);
    }
    for (const auto& c : b.commands) {
      if (const auto* a = std::get_if<Assign>(&c)) {
        use(a->lhs, b.label, local, "command " + a->target);
        use(a->rhs, b.label, local, "command " + a->target);
        local.insert(a->target);
      }
    }
    if (const auto* r = std::get_if<Ret>(&b.term)) use(r->value, b.label, local, "ret");
    if (const auto* bc = std::get_if<BrCond>(&b.term)) use(bc->cond, b.label, local, "br");
  }
  return issues;
}

void validate(const Function& f) {
  auto issues = check(f);
  if (!issues.empty()) throw VminusError(std::move(issues));
}

std::string VOutcome::to_string() const {
  switch (kind) {
    case VKind::Returned: return "ret " + value->to_string();
    case VKind::Errored: return "error " + label;
    case VKind::HitUnreachable: return "unreachable";
    case VKind::OutOfFuel: return "out-of-fuel";
  }
  return "?";
}

VOutcome eval_vminus(const Function& f, const std::vector<Integer>& args, std::uint64_t fuel) {
  if (args.size() != f.params.size())
    throw std::invalid_argument("expected " + std::to_string(f.params.size()) + " arguments, got " +
                                std::to_string(args.size()));
  std::map<std::string, Const> env;
  for (std::size_t i = 0; i < args.size(); ++i) env.insert_or_assign(f.params[i], Const::integer(args[i]));
  auto value = [&](const Operand& o) -> const Const& {
    if (!o.is_var()) return o.value();
    auto it = env.find(o.name());
    if (it == env.end()) throw std::runtime_error("read of unassigned variable " + o.name());
    return it->second;
  };

  VOutcome out;
  std::uint64_t steps = 0;
  auto tick = [&] {
    if (steps >= fuel) return false;
    ++steps;
    return true;
  };
  auto finish = [&](VKind k) {
    out.kind = k;
    out.steps = steps;
    return out;
  };

  const Block* cur = &f.entry();
  std::string prev;
  for (;;) {
    std::vector<std::pair<std::string, Const>> phi_values;
    for (const auto& p : cur->phis) {
      if (!tick()) return finish(VKind::OutOfFuel);
      const Operand* chosen = nullptr;
      for (const auto& [v, from] : p.incoming)
        if (from == prev) chosen = &v;
      if (!chosen) throw std::runtime_error("phi " + p.target + " has no value for edge from " + prev);
      phi_values.emplace_back(p.target, value(*chosen));
    }
    for (auto& [k, v] : phi_values) env.insert_or_assign(k, std::move(v));

    for (const auto& c : cur->commands) {
      if (!tick()) return finish(VKind::OutOfFuel);
      if (std::holds_alternative<CallError>(c)) {
        out.label = "user";
        return finish(VKind::Errored);
      }
      const auto& a = std::get<Assign>(c);
      auto r = delta(a.op, value(a.lhs), value(a.rhs));
      if (!r) {
        out.label = "delta";
        return finish(VKind::Errored);
      }
      env.insert_or_assign(a.target, *r);
    }

    if (!tick()) return finish(VKind::OutOfFuel);
    std::string next;
    if (const auto* r = std::get_if<Ret>(&cur->term)) {
      out.value = value(r->value);
      return finish(VKind::Returned);
    } else if (std::holds_alternative<Unreachable>(cur->term)) {
      return finish(VKind::HitUnreachable);
    } else if (const auto* br = std::get_if<Br>(&cur->term)) {
      next = br->target;
    } else {
      const auto& bc = std::get<BrCond>(cur->term);
      next = value(bc.cond).truthy() ? bc.if_true : bc.if_false;
    }
    const Block* nb = f.find(next);
    if (!nb) throw std::runtime_error("branch to unknown block " + next);
    prev = cur->label;
    cur = nb;
  }
}

bool simplify_unreachable(Function& f, const std::string& l) {
  Block* b = f.find(l);
  if (!b) throw std::invalid_argument("no block named " + l);
  if (!std::holds_alternative<Unreachable>(b->term))
    throw std::invalid_argument("block " + l + " does not end in unreachable");

  bool changed = false;
  while (!b->commands.empty() && !std::holds_alternative<CallError>(b->commands.back())) {
    b->commands.pop_back();
    changed = true;
  }
  if (!b->commands.empty()) return changed;

  for (const auto& p : predecessors(f, l)) {
    Block* pb = f.find(p);
    if (const auto* bc = std::get_if<BrCond>(&pb->term)) {
      if (bc->if_true == l && bc->if_false == l) {
        pb->term = Unreachable{};
      } else if (bc->if_true == l) {
        pb->term = Br{bc->if_false};
      } else {
        pb->term = Br{bc->if_true};
      }
    } else {
      pb->term = Unreachable{};
    }
    changed = true;
  }

  if (l != f.entry().label) {
    for (auto it = f.blocks.begin(); it != f.blocks.end(); ++it)
      if (it->label == l) {
        f.blocks.erase(it);
        break;
      }
    return true;
  }
  if (!b->phis.empty()) {
    b->phis.clear();
    changed = true;
  }
  return changed;
}

Function simplify_function_cfg(Function f) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::string> labels;
    for (const auto& b : f.blocks) labels.push_back(b.label);
    for (const auto& l : labels) {
      const Block* b = f.find(l);
      if (!b || !std::holds_alternative<Unreachable>(b->term)) continue;
      changed |= simplify_unreachable(f, l);
    }
  }
  return f;
}

}  // namespace ucalc::vminus
