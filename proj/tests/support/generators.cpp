#include "generators.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ucalc/dominators.hpp"

namespace ucalc::testing {

namespace {

int pct(std::mt19937_64& rng) { return static_cast<int>(rng() % 100); }

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[rng() % xs.size()];
}

BinOpKind random_op(std::mt19937_64& rng) { return kAllOps[rng() % kAllOps.size()]; }

TermPtr leaf(std::mt19937_64& rng, const TermGenConfig& cfg, const std::vector<std::string>& scope) {
  int r = pct(rng);
  if (r < cfg.unreachable_pct) return Term::unreachable();
  r -= cfg.unreachable_pct;
  if (r < cfg.error_pct) return Term::err(rng() % 2 ? "a" : "b");
  if (!scope.empty() && rng() % 2) return Term::var(pick(rng, scope));
  switch (rng() % 4) {
    case 0: return Term::boolean(rng() % 2);
    case 1:
      if (rng() % 4) return Term::lam("z", Term::var("z"));
      return Term::lam("z", Term::app(Term::var("z"), Term::var("z")));
    default: return Term::integer(static_cast<int>(rng() % 9) - 3);
  }
}

TermPtr gen(std::mt19937_64& rng, const TermGenConfig& cfg, int depth, std::vector<std::string>& scope);

// Redex shapes the rewrite rules look for, which uniform generation rarely
// produces.
TermPtr shaped(std::mt19937_64& rng, const TermGenConfig& cfg, int depth, std::vector<std::string>& scope) {
  auto sub = [&] { return gen(rng, cfg, depth - 2, scope); };
  auto atom = [&]() -> TermPtr {
    if (!scope.empty() && rng() % 2) return Term::var(pick(rng, scope));
    return Term::integer(static_cast<int>(rng() % 4));
  };
  switch (rng() % 7) {
    case 0: return Term::if_(sub(), sub(), Term::unreachable());
    case 1: return Term::if_(sub(), Term::unreachable(), sub());
    case 2: return Term::seq(sub(), Term::unreachable());
    case 3: {
      TermPtr a = atom();
      auto test = [&](int c) { return Term::binop(BinOpKind::Eq, a, Term::integer(c)); };
      int c1 = static_cast<int>(rng() % 3), c2 = static_cast<int>(rng() % 3);
      return Term::if_(test(c1), sub(), Term::if_(test(c2), sub(), sub()));
    }
    case 4: return Term::if_(Term::if_(sub(), Term::integer(1), Term::boolean(false)), sub(), sub());
    case 5: {
      BinOpKind op = random_op(rng);
      TermPtr rhs = atom();
      return Term::if_(sub(), Term::binop(op, sub(), rhs), Term::binop(op, sub(), rhs));
    }
    default: {
      if (scope.empty()) return Term::if_(sub(), sub(), sub());
      TermPtr x = Term::var(pick(rng, scope));
      return Term::if_(x, sub(), Term::if_(x, sub(), sub()));
    }
  }
}

TermPtr gen(std::mt19937_64& rng, const TermGenConfig& cfg, int depth, std::vector<std::string>& scope) {
  if (depth <= 0 || pct(rng) < 25) return leaf(rng, cfg, scope);
  if (pct(rng) < 20) return shaped(rng, cfg, depth, scope);
  switch (rng() % 7) {
    case 0: {
      static const std::vector<std::string> names = {"x", "y", "w"};
      std::string x = pick(rng, names);
      scope.push_back(x);
      TermPtr body = gen(rng, cfg, depth - 1, scope);
      scope.pop_back();
      return Term::lam(x, body);
    }
    case 1: return Term::app(gen(rng, cfg, depth - 1, scope), gen(rng, cfg, depth - 1, scope));
    case 2:
    case 3: return Term::binop(random_op(rng), gen(rng, cfg, depth - 1, scope), gen(rng, cfg, depth - 1, scope));
    case 4:
    case 5:
      return Term::if_(gen(rng, cfg, depth - 1, scope), gen(rng, cfg, depth - 1, scope),
                       gen(rng, cfg, depth - 1, scope));
    default: return Term::seq(gen(rng, cfg, depth - 1, scope), gen(rng, cfg, depth - 1, scope));
  }
}

}  // namespace

TermPtr random_term(std::mt19937_64& rng, const TermGenConfig& cfg) {
  std::vector<std::string> scope = cfg.scope;
  return gen(rng, cfg, cfg.max_depth, scope);
}

std::vector<TermPtr> template_pool(const std::vector<std::string>& scope) {
  std::vector<TermPtr> pool = {Term::integer(0), Term::integer(3), Term::boolean(true), Term::boolean(false),
                               Term::lam("z", Term::var("z")),
                               Term::binop(BinOpKind::Add, Term::integer(1), Term::integer(2)),
                               Term::err("a"), Term::unreachable()};
  for (const auto& x : scope) {
    pool.push_back(Term::var(x));
    pool.push_back(Term::binop(BinOpKind::Lt, Term::var(x), Term::integer(2)));
  }
  return pool;
}

namespace {

RewriteStep bwd(Rule r, const Path& at, TermPtr param) {
  RewriteStep s;
  s.rule = r;
  s.dir = Direction::Backward;
  s.at = at;
  s.term_param = std::move(param);
  return s;
}

// Replace every literal false in `e` by `x`, unless `x` is rebound.
TermPtr false_to_var(const TermPtr& e, const std::string& x, bool& hit) {
  if (e->is(TermKind::Lit) && e->value().is_bool() && !e->value().as_bool()) {
    hit = true;
    return Term::var(x);
  }
  if (e->is(TermKind::Lam) && e->name() == x) return e;
  if (e->arity() == 0) return e;
  std::array<TermPtr, 3> kids{};
  for (std::size_t i = 0; i < e->arity(); ++i) kids[i] = false_to_var(e->child(i), x, hit);
  return Term::rebuild(e, kids);
}

void instantiate(const TermPtr& e, const RuleInstance& inst, const std::vector<TermPtr>& pool,
                 std::vector<RewriteStep>& out) {
  const Path& at = inst.step.at;
  TermPtr s = subterm_at(e, at);
  Rule r = inst.step.rule;
  for (const auto& p : pool) {
    switch (r) {
      case Rule::P1: out.push_back(bwd(r, at, Term::seq(p, s))); break;
      case Rule::P2: out.push_back(bwd(r, at, Term::seq(s, p))); break;
      case Rule::P4: out.push_back(bwd(r, at, Term::app(s, p))); break;
      case Rule::P5:
        out.push_back(bwd(r, at, Term::binop(BinOpKind::Add, s, p)));
        out.push_back(bwd(r, at, Term::if_(s, p, p)));
        break;
      case Rule::M1: out.push_back(bwd(r, at, Term::if_(Term::integer(1), s, p))); break;
      case Rule::M2: out.push_back(bwd(r, at, Term::if_(Term::boolean(false), p, s))); break;
      case Rule::M3: {
        std::string x = fresh_name("u", all_names(s));
        out.push_back(bwd(r, at, Term::app(Term::lam(x, s), p)));
        break;
      }
      case Rule::M4: out.push_back(bwd(r, at, Term::seq(p, s))); break;
      default: break;
    }
  }
  if (r == Rule::M8 && s->is(TermKind::If) && s->child(0)->is(TermKind::Var)) {
    bool hit = false;
    TermPtr ef = false_to_var(s->child(2), s->child(0)->name(), hit);
    if (hit) out.push_back(bwd(r, at, Term::if_(s->child(0), s->child(1), ef)));
  }
  if (r == Rule::M9 && s->is(TermKind::If)) {
    out.push_back(bwd(r, at, Term::if_(Term::if_(s->child(0), Term::boolean(true), Term::boolean(false)),
                                       s->child(1), s->child(2))));
  }
}

}  // namespace

std::vector<RewriteStep> candidate_steps(const TermPtr& e, const SafetyProvider& safety,
                                         const std::vector<TermPtr>& pool) {
  std::vector<RewriteStep> out;
  EnumerationBudget budget;
  budget.max_instances = 1 << 14;
  for (const auto& inst : applicable_rules(e, safety, budget)) {
    if (inst.is_template)
      instantiate(e, inst, pool, out);
    else
      out.push_back(inst.step);
  }
  return out;
}

vminus::Function random_cfg(std::mt19937_64& rng, int max_blocks) {
  using namespace vminus;
  Function f;
  f.name = "g";
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_blocks));
  auto label = [](int i) { return "b" + std::to_string(i); };
  for (int i = 0; i < n; ++i) {
    Block b;
    b.label = label(i);
    int r = pct(rng);
    auto target = [&] { return label(static_cast<int>(rng() % static_cast<unsigned>(n))); };
    if (r < 15)
      b.term = Ret{Operand::constant(0)};
    else if (r < 45)
      b.term = Br{target()};
    else
      b.term = BrCond{Operand::constant(1), target(), target()};
    f.blocks.push_back(std::move(b));
  }
  return f;
}

namespace {

enum class Ty { Int, Bool };

struct VarInfo {
  std::string name;
  Ty ty;
};

}  // namespace

vminus::Function random_ssa_function(std::mt19937_64& rng, int max_blocks) {
  using namespace vminus;
  for (;;) {
    Function f;
    f.name = "f";
    std::size_t nparams = 1 + rng() % 2;
    for (std::size_t i = 0; i < nparams; ++i) f.params.push_back(i == 0 ? "%a" : "%b");
    int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, max_blocks - 1)));
    auto label = [](int i) { return i == 0 ? std::string("entry") : "b" + std::to_string(i); };
    int u = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    auto target = [&] { return label(1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1))); };

    // Shape first; operands are filled in once dominators are known.
    for (int i = 0; i < n; ++i) {
      Block b;
      b.label = label(i);
      int r = pct(rng);
      if (i == u || r < 3) {
        b.term = Unreachable{};
      } else if (r < 25) {
        b.term = Ret{Operand::constant(0)};
      } else if (r < 45) {
        std::string t = target();
        // Unconditional jumps into the dead block would make it reached on
        // most runs; guard them instead.
        if (t == label(u))
          b.term = BrCond{Operand::constant(0), target(), t};
        else
          b.term = Br{t};
      } else {
        b.term = BrCond{Operand::constant(0), target(), target()};
      }
      f.blocks.push_back(std::move(b));
    }
    DomTree dom = compute_dominators(f);
    bool all_reachable = true;
    for (const auto& b : f.blocks) all_reachable &= dom.reachable(b.label);
    if (!all_reachable) continue;

    // Variables visible at the end of each block.
    std::map<std::string, std::vector<VarInfo>> at_end;
    std::vector<VarInfo> params;
    for (const auto& p : f.params) params.push_back({p, Ty::Int});
    int counter = 0;
    auto fresh = [&] { return "%v" + std::to_string(counter++); };

    std::vector<std::string> order;
    std::vector<std::string> stack = {f.entry().label};
    while (!stack.empty()) {
      std::string l = stack.back();
      stack.pop_back();
      order.push_back(l);
      const auto& kids = dom.children(l);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }

    for (const auto& l : order) {
      Block& b = *f.find(l);
      std::vector<VarInfo> vis = dom.idom(l) ? at_end[*dom.idom(l)] : params;
      auto preds = predecessors(f, l);
      if (l != f.entry().label && (preds.size() > 1 || pct(rng) < 30)) {
        std::size_t k = 1 + rng() % 2;
        for (std::size_t i = 0; i < k; ++i) {
          Phi p;
          p.target = fresh();
          b.phis.push_back(p);
        }
        for (const auto& p : b.phis) vis.push_back({p.target, Ty::Int});
      }
      auto int_operand = [&] {
        std::vector<VarInfo> ints;
        for (const auto& v : vis)
          if (v.ty == Ty::Int) ints.push_back(v);
        if (ints.empty() || pct(rng) < 30) return Operand::constant(static_cast<int>(rng() % 7) - 2);
        return Operand::var(pick(rng, ints).name);
      };
      std::size_t ncmd = rng() % 4;
      for (std::size_t i = 0; i < ncmd; ++i) {
        if (pct(rng) < 6) {
          b.commands.push_back(CallError{});
          continue;
        }
        Assign a;
        a.target = fresh();
        a.op = random_op(rng);
        a.lhs = int_operand();
        a.rhs = int_operand();
        // Keeps loop-carried products from growing without bound.
        if (a.op == BinOpKind::Mul) a.rhs = Operand::constant(static_cast<int>(rng() % 5) - 2);
        bool cmp = a.op != BinOpKind::Add && a.op != BinOpKind::Sub && a.op != BinOpKind::Mul;
        vis.push_back({a.target, cmp ? Ty::Bool : Ty::Int});
        b.commands.push_back(a);
      }
      if (auto* bc = std::get_if<BrCond>(&b.term)) {
        std::vector<VarInfo> bools;
        for (const auto& v : vis)
          if (v.ty == Ty::Bool) bools.push_back(v);
        if (bools.empty() || pct(rng) < 40) {
          Assign a;
          a.target = fresh();
          a.op = rng() % 2 ? BinOpKind::Lt : BinOpKind::Le;
          a.lhs = int_operand();
          a.rhs = int_operand();
          b.commands.push_back(a);
          vis.push_back({a.target, Ty::Bool});
          bc->cond = Operand::var(a.target);
        } else {
          bc->cond = Operand::var(pick(rng, bools).name);
        }
      }
      if (auto* r = std::get_if<Ret>(&b.term)) r->value = int_operand();
      at_end[l] = vis;
    }

    // Phi incomings: an Int visible at the end of each predecessor.
    for (auto& b : f.blocks)
      for (auto& p : b.phis)
        for (const auto& pr : predecessors(f, b.label)) {
          std::vector<VarInfo> ints;
          for (const auto& v : at_end[pr])
            if (v.ty == Ty::Int) ints.push_back(v);
          Operand o = ints.empty() || pct(rng) < 25 ? Operand::constant(static_cast<int>(rng() % 7) - 2)
                                                    : Operand::var(pick(rng, ints).name);
          p.incoming.emplace_back(o, pr);
        }
    if (!check(f).empty()) continue;
    return f;
  }
}

std::string first_unreachable_block(const vminus::Function& f) {
  auto dom = vminus::compute_dominators(f);
  for (const auto& b : f.blocks)
    if (std::holds_alternative<vminus::Unreachable>(b.term) && dom.reachable(b.label)) return b.label;
  return "";
}

}  // namespace ucalc::testing
