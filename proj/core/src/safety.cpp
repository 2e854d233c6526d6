#include "ucalc/safety.hpp"

#include <random>
#include <stdexcept>

namespace ucalc {

std::string_view safety_name(Safety s) {
  switch (s) {
    case Safety::Safe: return "safe";
    case Safety::Unsafe: return "unsafe";
    case Safety::Unknown: return "unknown";
  }
  return "?";
}

TermPtr apply_substitution(const TermPtr& e, const Substitution& s) {
  TermPtr out = e;
  for (const auto& [x, v] : s) out = substitute(out, x, v);
  return out;
}

namespace {

bool syntactic(const TermPtr& e) {
  switch (e->kind()) {
    case TermKind::Lit:
    case TermKind::Lam:
    case TermKind::Var:
      return true;
    case TermKind::If:
    case TermKind::Seq:
      for (std::size_t i = 0; i < e->arity(); ++i)
        if (!syntactic(e->child(i))) return false;
      return true;
    case TermKind::BinOp:
      return e->child(0)->is(TermKind::Lit) && e->child(1)->is(TermKind::Lit) &&
             delta(e->op(), e->child(0)->value(), e->child(1)->value()).has_value();
    default:
      return false;
  }
}

enum class Ty { Int, Bool, Fun, Any };

// nullopt: possibly stuck; otherwise the type of every value it can produce.
std::optional<Ty> int_type(const TermPtr& e) {
  switch (e->kind()) {
    case TermKind::Lit:
      return e->value().is_int() ? Ty::Int : Ty::Bool;
    case TermKind::Lam:
      return Ty::Fun;
    case TermKind::Var:
      return Ty::Int;
    case TermKind::Seq: {
      if (!int_type(e->child(0))) return std::nullopt;
      return int_type(e->child(1));
    }
    case TermKind::If: {
      if (!int_type(e->child(0))) return std::nullopt;
      auto a = int_type(e->child(1));
      auto b = int_type(e->child(2));
      if (!a || !b) return std::nullopt;
      return *a == *b ? *a : Ty::Any;
    }
    case TermKind::BinOp: {
      auto a = int_type(e->child(0));
      auto b = int_type(e->child(1));
      if (!a || !b) return std::nullopt;
      switch (e->op()) {
        case BinOpKind::Add:
        case BinOpKind::Sub:
        case BinOpKind::Mul:
          if (*a == Ty::Int && *b == Ty::Int) return Ty::Int;
          return std::nullopt;
        case BinOpKind::Lt:
        case BinOpKind::Le:
          if (*a == Ty::Int && *b == Ty::Int) return Ty::Bool;
          return std::nullopt;
        case BinOpKind::Eq:
        case BinOpKind::Ne:
          if (*a == *b && (*a == Ty::Int || *a == Ty::Bool)) return Ty::Bool;
          return std::nullopt;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

class SyntacticProvider final : public SafetyProvider {
 public:
  bool is_safe(const TermPtr& e) const override { return syntactic(e); }
  std::string_view name() const override { return "syntactic"; }
};

class IntegerProvider final : public SafetyProvider {
 public:
  bool is_safe(const TermPtr& e) const override { return int_type(e).has_value(); }
  std::string_view name() const override { return "integer"; }
};

}  // namespace

SafetyVerdict safe_syntactic(const TermPtr& e) {
  SafetyVerdict v;
  v.verdict = syntactic(e) ? Safety::Safe : Safety::Unsafe;
  return v;
}

SafetyVerdict safe_integer_mode(const TermPtr& e) {
  SafetyVerdict v;
  v.verdict = int_type(e) ? Safety::Safe : Safety::Unsafe;
  return v;
}

ValuePool ValuePool::standard() {
  ValuePool p;
  for (int i : {0, 1, -1, 2, 7}) p.values.push_back(Term::integer(i));
  p.values.push_back(Term::boolean(true));
  p.values.push_back(Term::boolean(false));
  p.values.push_back(Term::lam("y", Term::var("y")));
  p.values.push_back(Term::lam("y", Term::boolean(false)));
  p.values.push_back(Term::lam("y", Term::boolean(true)));
  return p;
}

ValuePool ValuePool::integers() {
  ValuePool p;
  for (int i : {0, 1, -1, 2, -2, 3, 7, 10, -10, 100}) p.values.push_back(Term::integer(i));
  return p;
}

ValuePool ValuePool::booleans() {
  ValuePool p;
  p.values.push_back(Term::boolean(true));
  p.values.push_back(Term::boolean(false));
  return p;
}

SafetyVerdict safe_oracle(const TermPtr& e, const VarSet& delta, std::size_t samples, Fuel fuel,
                          std::uint64_t seed, const ValuePool& pool) {
  if (pool.values.empty()) throw std::invalid_argument("safe_oracle needs a non-empty value pool");
  if (!is_well_formed(e, delta)) throw std::invalid_argument("term has free variables outside delta");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.values.size() - 1);
  const std::size_t runs = delta.empty() ? 1 : samples;
  for (std::size_t i = 0; i < runs; ++i) {
    Substitution s;
    for (const auto& x : delta) s.emplace_back(x, pool.values[pick(rng)]);
    Observation o = eval(apply_substitution(e, s), fuel);
    if (o.kind == ObsKind::Timeout) continue;
    if (o.kind != ObsKind::Value && o.kind != ObsKind::Function) {
      SafetyVerdict v;
      v.verdict = Safety::Unsafe;
      v.witness = std::move(s);
      v.witness_observation = o;
      return v;
    }
  }
  return {};
}

const SafetyProvider& syntactic_safety() {
  static const SyntacticProvider p;
  return p;
}

const SafetyProvider& integer_safety() {
  static const IntegerProvider p;
  return p;
}

const SafetyProvider& safety_by_name(std::string_view name) {
  if (name == "syntactic") return syntactic_safety();
  if (name == "integer") return integer_safety();
  throw std::invalid_argument("unknown safety mode '" + std::string(name) + "'");
}

}  // namespace ucalc
