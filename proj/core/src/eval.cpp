#include "ucalc/eval.hpp"

namespace ucalc {

std::optional<Const> delta(BinOpKind op, const Const& a, const Const& b) {
  switch (op) {
    case BinOpKind::Add:
    case BinOpKind::Sub:
    case BinOpKind::Mul:
    case BinOpKind::Lt:
    case BinOpKind::Le: {
      if (!a.is_int() || !b.is_int()) return std::nullopt;
      const Integer& x = a.as_int();
      const Integer& y = b.as_int();
      if (op == BinOpKind::Add) return Const::integer(x + y);
      if (op == BinOpKind::Sub) return Const::integer(x - y);
      if (op == BinOpKind::Mul) return Const::integer(x * y);
      if (op == BinOpKind::Lt) return Const::boolean(x < y);
      return Const::boolean(x <= y);
    }
    case BinOpKind::Eq:
    case BinOpKind::Ne: {
      if (a.is_int() != b.is_int()) return std::nullopt;
      bool eq = a == b;
      return Const::boolean(op == BinOpKind::Eq ? eq : !eq);
    }
  }
  return std::nullopt;
}

std::string Observation::to_string() const {
  switch (kind) {
    case ObsKind::Value: return "value " + value->to_string();
    case ObsKind::Function: return "function";
    case ObsKind::Error: return "error " + label;
    case ObsKind::Undef: return "undef";
    case ObsKind::Timeout: return "timeout";
  }
  return "?";
}

bool operator==(const Observation& a, const Observation& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ObsKind::Value) return *a.value == *b.value;
  if (a.kind == ObsKind::Error) return a.label == b.label;
  return true;
}

std::string_view step_rule_name(StepRule r) {
  switch (r) {
    case StepRule::IfFalse: return "if-false";
    case StepRule::IfTrue: return "if-true";
    case StepRule::Beta: return "beta";
    case StepRule::SeqValue: return "seq";
    case StepRule::Delta: return "delta";
    case StepRule::AbortUnreachable: return "abort-unreachable";
    case StepRule::AbortError: return "abort-error";
    case StepRule::BetaError: return "beta-error";
    case StepRule::DeltaError: return "delta-error";
  }
  return "?";
}

namespace {

// Substitution of a closed value never needs renaming.
TermPtr subst_closed(const TermPtr& e, const std::string& x, const TermPtr& v) {
  if (!(e->name_mask() & name_bit(x))) return e;
  switch (e->kind()) {
    case TermKind::Var:
      return e->name() == x ? v : e;
    case TermKind::Lam:
      if (e->name() == x) return e;
      return Term::rebuild(e, {subst_closed(e->child(0), x, v), nullptr, nullptr});
    default: {
      std::array<TermPtr, 3> kids{};
      for (std::size_t i = 0; i < e->arity(); ++i) kids[i] = subst_closed(e->child(i), x, v);
      return Term::rebuild(e, kids);
    }
  }
}

TermPtr apply_value(const TermPtr& fn, const TermPtr& arg) {
  if (fn->is(TermKind::Lam)) return subst_closed(fn->child(0), fn->name(), arg);
  return Term::err("beta");
}

TermPtr apply_delta(BinOpKind op, const TermPtr& a, const TermPtr& b) {
  if (a->is(TermKind::Lit) && b->is(TermKind::Lit))
    if (auto c = delta(op, a->value(), b->value())) return Term::lit(*c);
  return Term::err("delta");
}

enum class Tag { Value, Abort, Stepped };

struct Reduced {
  Tag tag;
  TermPtr term;
};

Reduced reduce(const TermPtr& e) {
  switch (e->kind()) {
    case TermKind::Lit:
    case TermKind::Lam:
      return {Tag::Value, e};
    case TermKind::Err:
    case TermKind::Unreachable:
      return {Tag::Abort, e};
    case TermKind::Var:
      throw OpenTermError("free variable '" + e->name() + "' during evaluation");
    case TermKind::App:
    case TermKind::BinOp: {
      Reduced l = reduce(e->child(0));
      if (l.tag == Tag::Abort) return l;
      if (l.tag == Tag::Stepped) return {Tag::Stepped, Term::rebuild(e, {l.term, e->child(1), nullptr})};
      Reduced r = reduce(e->child(1));
      if (r.tag == Tag::Abort) return r;
      if (r.tag == Tag::Stepped) return {Tag::Stepped, Term::rebuild(e, {e->child(0), r.term, nullptr})};
      if (e->is(TermKind::App)) return {Tag::Stepped, apply_value(e->child(0), e->child(1))};
      return {Tag::Stepped, apply_delta(e->op(), e->child(0), e->child(1))};
    }
    case TermKind::If: {
      Reduced t = reduce(e->child(0));
      if (t.tag == Tag::Abort) return t;
      if (t.tag == Tag::Stepped)
        return {Tag::Stepped, Term::rebuild(e, {t.term, e->child(1), e->child(2)})};
      bool truthy = !(e->child(0)->is(TermKind::Lit) && e->child(0)->value().is_bool() &&
                      !e->child(0)->value().as_bool());
      return {Tag::Stepped, truthy ? e->child(1) : e->child(2)};
    }
    case TermKind::Seq: {
      Reduced a = reduce(e->child(0));
      if (a.tag == Tag::Abort) return a;
      if (a.tag == Tag::Stepped) return {Tag::Stepped, Term::rebuild(e, {a.term, e->child(1), nullptr})};
      return {Tag::Stepped, e->child(1)};
    }
  }
  throw std::logic_error("unknown term kind");
}

std::optional<TermPtr> step_unchecked(const TermPtr& e) {
  if (is_answer(*e)) return std::nullopt;
  Reduced r = reduce(e);
  return r.term;
}

bool decompose_rec(const TermPtr& e, Path& path, Decomposition& out) {
  auto found = [&](StepRule rule) {
    out.redex = e;
    out.rule = rule;
    out.context.hole = path;
    return true;
  };
  auto descend = [&](std::uint32_t i) {
    path.push_back(i);
    bool r = decompose_rec(e->child(i), path, out);
    path.pop_back();
    return r;
  };
  switch (e->kind()) {
    case TermKind::Lit:
    case TermKind::Lam:
      return false;
    case TermKind::Var:
      throw OpenTermError("free variable '" + e->name() + "' during decomposition");
    case TermKind::Err:
      return found(StepRule::AbortError);
    case TermKind::Unreachable:
      return found(StepRule::AbortUnreachable);
    case TermKind::App:
    case TermKind::BinOp: {
      if (!is_value(*e->child(0))) return descend(0);
      if (!is_value(*e->child(1))) return descend(1);
      if (e->is(TermKind::App))
        return found(e->child(0)->is(TermKind::Lam) ? StepRule::Beta : StepRule::BetaError);
      bool defined = e->child(0)->is(TermKind::Lit) && e->child(1)->is(TermKind::Lit) &&
                     delta(e->op(), e->child(0)->value(), e->child(1)->value());
      return found(defined ? StepRule::Delta : StepRule::DeltaError);
    }
    case TermKind::If: {
      if (!is_value(*e->child(0))) return descend(0);
      bool is_false = e->child(0)->is(TermKind::Lit) && e->child(0)->value() == Const::boolean(false);
      return found(is_false ? StepRule::IfFalse : StepRule::IfTrue);
    }
    case TermKind::Seq:
      if (!is_value(*e->child(0))) return descend(0);
      return found(StepRule::SeqValue);
  }
  return false;
}

}  // namespace

std::optional<Decomposition> decompose(const TermPtr& e) {
  if (is_answer(*e)) return std::nullopt;
  Decomposition d;
  d.context.term = e;
  Path path;
  if (!decompose_rec(e, path, d)) return std::nullopt;
  return d;
}

TermPtr contract(const Decomposition& d) {
  const TermPtr& r = d.redex;
  switch (d.rule) {
    case StepRule::AbortError:
    case StepRule::AbortUnreachable:
      return r;
    case StepRule::IfFalse:
      return d.context.plug(r->child(2));
    case StepRule::IfTrue:
      return d.context.plug(r->child(1));
    case StepRule::SeqValue:
      return d.context.plug(r->child(1));
    case StepRule::Beta:
    case StepRule::BetaError:
      return d.context.plug(apply_value(r->child(0), r->child(1)));
    case StepRule::Delta:
    case StepRule::DeltaError:
      return d.context.plug(apply_delta(r->op(), r->child(0), r->child(1)));
  }
  throw std::logic_error("unknown step rule");
}

std::optional<TermPtr> step(const TermPtr& e) {
  if (!is_closed(e)) throw OpenTermError("step requires a closed term");
  return step_unchecked(e);
}

Observation eval(const TermPtr& e, Fuel fuel) {
  if (!is_closed(e)) throw OpenTermError("eval requires a closed term");
  Observation obs;
  TermPtr cur = e;
  std::uint64_t n = 0;
  while (!is_answer(*cur)) {
    if (n >= fuel.max_steps) {
      obs.kind = ObsKind::Timeout;
      obs.steps = n;
      return obs;
    }
    cur = reduce(cur).term;
    ++n;
  }
  obs.steps = n;
  switch (cur->kind()) {
    case TermKind::Lit:
      obs.kind = ObsKind::Value;
      obs.value = cur->value();
      break;
    case TermKind::Lam:
      obs.kind = ObsKind::Function;
      break;
    case TermKind::Err:
      obs.kind = ObsKind::Error;
      obs.label = cur->name();
      break;
    default:
      obs.kind = ObsKind::Undef;
      break;
  }
  return obs;
}

Tri is_undef(const TermPtr& e, Fuel fuel) {
  Observation o = eval(e, fuel);
  if (o.kind == ObsKind::Timeout) return Tri::Unknown;
  return o.kind == ObsKind::Undef ? Tri::Yes : Tri::No;
}

}  // namespace ucalc
