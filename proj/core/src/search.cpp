#include <algorithm>
#include <queue>
#include <unordered_map>

#include "rewrite_internal.hpp"
#include "ucalc/eval.hpp"
#include "ucalc/rewrite.hpp"

namespace ucalc {

namespace {

RewriteStep make_step(Rule r, Direction d, const Path& at, const SafetyProvider& safety) {
  RewriteStep s;
  s.rule = r;
  s.dir = d;
  s.at = at;
  if (uses_safety(r, d)) s.safety = std::string(safety.name());
  return s;
}

// Forward instances at one position that need no term parameter.
void forward_instances(const TermPtr& s, const Path& at, const SafetyProvider& safety,
                       std::vector<RuleInstance>& out) {
  for (Rule r : kAllRules) {
    if (r == Rule::M6 || r == Rule::M7) {
      for (const auto& h : detail::eplus_holes(s, r == Rule::M6 ? TermKind::Seq : TermKind::If)) {
        RuleInstance inst{make_step(r, Direction::Forward, at, safety), false, {}};
        inst.step.hole_param = h;
        out.push_back(std::move(inst));
      }
      continue;
    }
    detail::Outcome o = detail::forward(r, s, std::nullopt, safety);
    if (!o) continue;
    if (r == Rule::M8 && o.term->child(2) == s->child(2)) continue;
    out.push_back(RuleInstance{make_step(r, Direction::Forward, at, safety), false, {}});
  }
}

RuleInstance backward_with(Rule r, const Path& at, const TermPtr& param, const SafetyProvider& safety,
                           std::string note = {}) {
  RuleInstance inst{make_step(r, Direction::Backward, at, safety), false, std::move(note)};
  inst.step.term_param = param;
  return inst;
}

RuleInstance backward_template(Rule r, const Path& at, const SafetyProvider& safety, std::string note) {
  RuleInstance inst{make_step(r, Direction::Backward, at, safety), true, std::move(note)};
  return inst;
}

// Backward instances of M6 and M7 are determined by the current subterm.
void context_backward_instances(const TermPtr& s, const Path& at, const SafetyProvider& safety,
                                std::vector<RuleInstance>& out) {
  if (s->is(TermKind::Seq)) {
    const TermPtr& x = s->child(1);
    for (const auto& h : detail::eplus_spine(x)) {
      TermPtr t = replace_at(x, h, Term::seq(s->child(0), subterm_at(x, h)));
      out.push_back(backward_with(Rule::M6, at, t, safety));
    }
  }
  if (s->is(TermKind::If)) {
    const TermPtr& a = s->child(1);
    const TermPtr& b = s->child(2);
    const TermPtr hole = Term::var("[]");
    for (const auto& h : detail::eplus_spine(a)) {
      if (!path_valid(b, h)) continue;
      if (!alpha_eq(replace_at(a, h, hole), replace_at(b, h, hole))) continue;
      TermPtr t = replace_at(a, h, Term::if_(s->child(0), subterm_at(a, h), subterm_at(b, h)));
      out.push_back(backward_with(Rule::M7, at, t, safety));
    }
  }
}

void m5_preimages(const TermPtr& s, const Path& at, const SafetyProvider& safety, int radius,
                  std::vector<RuleInstance>& out) {
  if (!s->is(TermKind::Lit)) return;
  std::vector<Const> operands;
  for (int i = -radius; i <= radius; ++i) operands.push_back(Const::integer(i));
  // Operands near the constant itself reach it through +, - and *.
  if (s->value().is_int())
    for (int i = -radius; i <= radius; ++i) {
      Integer n = s->value().as_int() + i;
      if (n < -radius || n > radius) operands.push_back(Const::integer(n));
    }
  operands.push_back(Const::boolean(true));
  operands.push_back(Const::boolean(false));
  for (BinOpKind op : kAllOps)
    for (const auto& a : operands)
      for (const auto& b : operands) {
        auto c = delta(op, a, b);
        if (c && *c == s->value())
          out.push_back(backward_with(Rule::M5, at, Term::binop(op, Term::lit(a), Term::lit(b)), safety));
      }
}

}  // namespace

std::vector<RuleInstance> applicable_rules(const TermPtr& e, const SafetyProvider& safety,
                                           const EnumerationBudget& budget) {
  std::vector<RuleInstance> out;
  for (const auto& at : all_paths(e)) {
    if (out.size() >= budget.max_instances) break;
    TermPtr s = subterm_at(e, at);
    forward_instances(s, at, safety, out);
    if (auto m10 = detail::forward(Rule::M10, s, std::nullopt, safety))
      out.push_back(backward_with(Rule::M10, at, m10.term, safety));
    context_backward_instances(s, at, safety, out);
    if (s->is(TermKind::Unreachable)) {
      out.push_back(backward_template(Rule::P1, at, safety, "(seq e (unreachable)) with e safe"));
      out.push_back(backward_template(Rule::P2, at, safety, "(seq (unreachable) e)"));
      out.push_back(backward_template(Rule::P4, at, safety, "((unreachable) e)"));
      out.push_back(backward_template(Rule::P5, at, safety, "(op (unreachable) e) or (if (unreachable) e e')"));
    }
    if (s->is(TermKind::Seq) && s->child(1)->is(TermKind::Unreachable)) {
      out.push_back(backward_with(Rule::P3, at, Term::app(s->child(0), s->child(1)), safety));
      for (BinOpKind op : kAllOps)
        out.push_back(backward_with(Rule::P3, at, Term::binop(op, s->child(0), s->child(1)), safety));
    }
    out.push_back(backward_template(Rule::M1, at, safety, "(if v e ef) with v a non-false value"));
    out.push_back(backward_template(Rule::M2, at, safety, "(if false et e)"));
    out.push_back(backward_template(Rule::M3, at, safety, "((lambda (x) e0) es) with e0[x := es] = e"));
    out.push_back(backward_template(Rule::M4, at, safety, "(seq e0 e) with e0 safe"));
    m5_preimages(s, at, safety, budget.preimage_radius, out);
    if (s->is(TermKind::If)) {
      if (s->child(0)->is(TermKind::Var))
        out.push_back(backward_template(Rule::M8, at, safety, "else branch with false generalized to the test"));
      out.push_back(backward_template(Rule::M9, at, safety, "(if (if e v false) et ef)"));
    }
  }
  if (out.size() > budget.max_instances) out.resize(budget.max_instances);
  return out;
}

Normalized normalize_unreachable(const TermPtr& e, const SafetyProvider& safety) {
  static constexpr Rule kOrder[] = {Rule::U1, Rule::U2, Rule::P2, Rule::P4,
                                    Rule::P5, Rule::P1, Rule::P3, Rule::M4};
  Normalized out{e, {}};
  for (;;) {
    bool changed = false;
    // all_paths is preorder; walking it backwards visits children before parents.
    auto paths = all_paths(out.term);
    for (auto it = paths.rbegin(); it != paths.rend() && !changed; ++it) {
      TermPtr s = subterm_at(out.term, *it);
      for (Rule r : kOrder) {
        detail::Outcome o = detail::forward(r, s, std::nullopt, safety);
        if (!o) continue;
        out.term = replace_at(out.term, *it, o.term);
        out.trace.push_back(make_step(r, Direction::Forward, *it, safety));
        changed = true;
        break;
      }
    }
    if (!changed) return out;
  }
}

namespace {

struct Binders {
  std::vector<const std::string*> names;

  int index_of(const std::string& n) const {
    for (int i = static_cast<int>(names.size()) - 1; i >= 0; --i)
      if (*names[i] == n) return i;
    return -1;
  }
};

bool same_label(const Term& a, const Term& b, const Binders& ea, const Binders& eb) {
  switch (a.kind()) {
    case TermKind::Var: {
      int i = ea.index_of(a.name());
      int j = eb.index_of(b.name());
      if (i < 0 && j < 0) return a.name() == b.name();
      return i == j;
    }
    case TermKind::Lit: return a.value() == b.value();
    case TermKind::Err: return a.name() == b.name();
    case TermKind::BinOp: return a.op() == b.op();
    default: return true;
  }
}

std::size_t distance_rec(const TermPtr& a, const TermPtr& b, Binders& ea, Binders& eb, Path& at,
                         std::vector<Path>* diffs) {
  if (a->kind() != b->kind()) {
    if (diffs) diffs->push_back(at);
    return a->size() + b->size();
  }
  std::size_t d = 0;
  if (!same_label(*a, *b, ea, eb)) {
    if (diffs) diffs->push_back(at);
    d = 1;
  }
  if (a->is(TermKind::Lam)) {
    ea.names.push_back(&a->name());
    eb.names.push_back(&b->name());
  }
  for (std::uint32_t i = 0; i < a->arity(); ++i) {
    at.push_back(i);
    d += distance_rec(a->child(i), b->child(i), ea, eb, at, diffs);
    at.pop_back();
  }
  if (a->is(TermKind::Lam)) {
    ea.names.pop_back();
    eb.names.pop_back();
  }
  return d;
}

std::size_t distance_with_diffs(const TermPtr& a, const TermPtr& b, std::vector<Path>* diffs) {
  Binders ea, eb;
  Path at;
  return distance_rec(a, b, ea, eb, at, diffs);
}

bool binders_match(const TermPtr& a, const TermPtr& b, const Path& p) {
  const Term* x = a.get();
  const Term* y = b.get();
  for (auto i : p) {
    if (x->kind() != y->kind() || i >= x->arity()) return false;
    if (x->is(TermKind::Lam) && x->name() != y->name()) return false;
    x = x->child(i).get();
    y = y->child(i).get();
  }
  return true;
}

struct Node {
  TermPtr term;
  RewriteTrace trace;
  std::size_t distance;
  std::size_t order;
};

struct NodeWorse {
  bool operator()(const Node& a, const Node& b) const {
    if (a.distance != b.distance) return a.distance > b.distance;
    if (a.trace.size() != b.trace.size()) return a.trace.size() > b.trace.size();
    return a.order > b.order;
  }
};

class Visited {
 public:
  bool insert(const TermPtr& t) {
    auto& bucket = seen_[alpha_hash(t)];
    for (const auto& u : bucket)
      if (alpha_eq(u, t)) return false;
    bucket.push_back(t);
    return true;
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<TermPtr>> seen_;
};

// Positions worth rewriting: ancestors of mismatches and everything inside them.
std::vector<Path> focus_paths(const TermPtr& cur, const std::vector<Path>& diffs, std::size_t cap) {
  std::vector<Path> out;
  auto add = [&](const Path& p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  for (const auto& d : diffs) {
    for (std::size_t k = 0; k <= d.size(); ++k) add(Path(d.begin(), d.begin() + static_cast<long>(k)));
    if (!path_valid(cur, d)) continue;
    for (auto sub : all_paths(subterm_at(cur, d))) {
      if (out.size() >= cap) return out;
      Path full = d;
      full.insert(full.end(), sub.begin(), sub.end());
      add(full);
    }
    if (out.size() >= cap) break;
  }
  return out;
}

}  // namespace

std::size_t term_distance(const TermPtr& a, const TermPtr& b) { return distance_with_diffs(a, b, nullptr); }

std::optional<RewriteTrace> search_equiv(const TermPtr& e, const TermPtr& target, const SearchBounds& bounds,
                                         const SafetyProvider& safety) {
  if (alpha_eq(e, target)) return RewriteTrace{};
  std::priority_queue<Node, std::vector<Node>, NodeWorse> frontier;
  Visited visited;
  visited.insert(e);
  std::size_t order = 0;
  frontier.push(Node{e, {}, term_distance(e, target), order++});

  for (std::size_t expansions = 0; expansions < bounds.max_expansions && !frontier.empty(); ++expansions) {
    Node node = frontier.top();
    frontier.pop();
    if (node.trace.size() >= bounds.depth) continue;

    std::vector<Path> diffs;
    distance_with_diffs(node.term, target, &diffs);
    std::vector<RewriteStep> candidates;
    for (const auto& at : focus_paths(node.term, diffs, 512)) {
      TermPtr s = subterm_at(node.term, at);
      std::vector<RuleInstance> inst;
      forward_instances(s, at, safety, inst);
      context_backward_instances(s, at, safety, inst);
      if (path_valid(target, at) && binders_match(node.term, target, at)) {
        TermPtr want = subterm_at(target, at);
        for (Rule r : kAllRules)
          if (!is_u_rule(r)) inst.push_back(backward_with(r, at, want, safety));
      }
      for (auto& i : inst) candidates.push_back(std::move(i.step));
    }

    std::vector<Node> children;
    for (auto& step : candidates) {
      TermPtr next;
      try {
        next = apply_rule(node.term, step, safety);
      } catch (const RewriteError&) {
        continue;
      }
      if (!visited.insert(next)) continue;
      RewriteTrace trace = node.trace;
      trace.push_back(std::move(step));
      if (alpha_eq(next, target)) {
        if (alpha_eq(apply_trace(e, trace, safety), target)) return trace;
        continue;
      }
      children.push_back(Node{next, std::move(trace), term_distance(next, target), order++});
    }
    std::sort(children.begin(), children.end(), [](const Node& a, const Node& b) { return NodeWorse{}(b, a); });
    if (children.size() > bounds.width) children.resize(bounds.width);
    for (auto& c : children) frontier.push(std::move(c));
  }
  return std::nullopt;
}

}  // namespace ucalc
