#include "ucalc/term.hpp"

#include <functional>
#include <unordered_map>

namespace ucalc {

std::string Const::to_string() const {
  if (is_bool()) return as_bool() ? "true" : "false";
  return as_int().str();
}

std::string_view op_symbol(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "+";
    case BinOpKind::Sub: return "-";
    case BinOpKind::Mul: return "*";
    case BinOpKind::Lt: return "<";
    case BinOpKind::Le: return "<=";
    case BinOpKind::Eq: return "=";
    case BinOpKind::Ne: return "!=";
  }
  return "?";
}

std::optional<BinOpKind> op_from_symbol(std::string_view s) {
  for (BinOpKind op : kAllOps)
    if (op_symbol(op) == s) return op;
  return std::nullopt;
}

std::uint64_t name_bit(std::string_view name) {
  return std::uint64_t{1} << (std::hash<std::string_view>{}(name) & 63u);
}

TermPtr Term::make(Term t) {
  t.size_ = 1;
  for (std::size_t i = 0; i < t.arity_; ++i) {
    t.size_ += t.kids_[i]->size_;
    t.mask_ |= t.kids_[i]->mask_;
  }
  if (t.kind_ == TermKind::Var || t.kind_ == TermKind::Lam) t.mask_ |= name_bit(t.text_);
  return TermPtr(new Term(std::move(t)));
}

TermPtr Term::var(std::string name) {
  Term t;
  t.kind_ = TermKind::Var;
  t.text_ = std::move(name);
  return make(std::move(t));
}

TermPtr Term::lit(Const c) {
  Term t;
  t.kind_ = TermKind::Lit;
  t.lit_ = std::move(c);
  return make(std::move(t));
}

TermPtr Term::lam(std::string param, TermPtr body) {
  Term t;
  t.kind_ = TermKind::Lam;
  t.text_ = std::move(param);
  t.arity_ = 1;
  t.kids_[0] = std::move(body);
  return make(std::move(t));
}

TermPtr Term::app(TermPtr fn, TermPtr arg) {
  Term t;
  t.kind_ = TermKind::App;
  t.arity_ = 2;
  t.kids_ = {std::move(fn), std::move(arg), nullptr};
  return make(std::move(t));
}

TermPtr Term::binop(BinOpKind op, TermPtr lhs, TermPtr rhs) {
  Term t;
  t.kind_ = TermKind::BinOp;
  t.op_ = op;
  t.arity_ = 2;
  t.kids_ = {std::move(lhs), std::move(rhs), nullptr};
  return make(std::move(t));
}

TermPtr Term::if_(TermPtr test, TermPtr then_branch, TermPtr else_branch) {
  Term t;
  t.kind_ = TermKind::If;
  t.arity_ = 3;
  t.kids_ = {std::move(test), std::move(then_branch), std::move(else_branch)};
  return make(std::move(t));
}

TermPtr Term::seq(TermPtr first, TermPtr second) {
  Term t;
  t.kind_ = TermKind::Seq;
  t.arity_ = 2;
  t.kids_ = {std::move(first), std::move(second), nullptr};
  return make(std::move(t));
}

TermPtr Term::err(std::string label) {
  Term t;
  t.kind_ = TermKind::Err;
  t.text_ = std::move(label);
  return make(std::move(t));
}

TermPtr Term::unreachable() {
  static const TermPtr u = [] {
    Term t;
    t.kind_ = TermKind::Unreachable;
    return make(std::move(t));
  }();
  return u;
}

TermPtr Term::rebuild(const TermPtr& self, const std::array<TermPtr, 3>& kids) {
  bool changed = false;
  for (std::size_t i = 0; i < self->arity_; ++i) changed |= kids[i] != self->kids_[i];
  if (!changed) return self;
  Term t;
  t.kind_ = self->kind_;
  t.op_ = self->op_;
  t.arity_ = self->arity_;
  t.text_ = self->text_;
  t.lit_ = self->lit_;
  t.kids_ = kids;
  return make(std::move(t));
}

bool operator==(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TermKind::Var:
    case TermKind::Err:
      return a.name() == b.name();
    case TermKind::Lit:
      return a.value() == b.value();
    case TermKind::Lam:
      if (a.name() != b.name()) return false;
      break;
    case TermKind::BinOp:
      if (a.op() != b.op()) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(*a.child(i) == *b.child(i))) return false;
  return true;
}

bool is_value(const Term& e) { return e.is(TermKind::Lit) || e.is(TermKind::Lam); }

bool is_answer(const Term& e) {
  return is_value(e) || e.is(TermKind::Err) || e.is(TermKind::Unreachable);
}

namespace {

void collect_free(const TermPtr& e, std::vector<std::string>& bound, VarSet& out) {
  switch (e->kind()) {
    case TermKind::Var:
      for (auto it = bound.rbegin(); it != bound.rend(); ++it)
        if (*it == e->name()) return;
      out.insert(e->name());
      return;
    case TermKind::Lam:
      bound.push_back(e->name());
      collect_free(e->child(0), bound, out);
      bound.pop_back();
      return;
    default:
      for (std::size_t i = 0; i < e->arity(); ++i) collect_free(e->child(i), bound, out);
  }
}

bool has_free(const TermPtr& e, const std::string& x) {
  if (!(e->name_mask() & name_bit(x))) return false;
  switch (e->kind()) {
    case TermKind::Var: return e->name() == x;
    case TermKind::Lam: return e->name() != x && has_free(e->child(0), x);
    default:
      for (std::size_t i = 0; i < e->arity(); ++i)
        if (has_free(e->child(i), x)) return true;
      return false;
  }
}

void collect_names(const TermPtr& e, VarSet& out) {
  if (e->is(TermKind::Var) || e->is(TermKind::Lam)) out.insert(e->name());
  for (std::size_t i = 0; i < e->arity(); ++i) collect_names(e->child(i), out);
}

}  // namespace

VarSet free_vars(const TermPtr& e) {
  VarSet out;
  std::vector<std::string> bound;
  collect_free(e, bound, out);
  return out;
}

bool is_closed(const TermPtr& e) { return free_vars(e).empty(); }

bool occurs_free(const TermPtr& e, const std::string& x) { return has_free(e, x); }

bool is_well_formed(const TermPtr& e, const VarSet& delta) {
  for (const auto& x : free_vars(e))
    if (!delta.count(x)) return false;
  return true;
}

VarSet all_names(const TermPtr& e) {
  VarSet out;
  collect_names(e, out);
  return out;
}

std::string fresh_name(const std::string& base, const VarSet& avoid) {
  std::string candidate = base + "'";
  while (avoid.count(candidate)) candidate += "'";
  return candidate;
}

namespace {

TermPtr subst(const TermPtr& e, const std::string& x, const TermPtr& v, const VarSet& fv_v) {
  if (!(e->name_mask() & name_bit(x))) return e;
  switch (e->kind()) {
    case TermKind::Var:
      return e->name() == x ? v : e;
    case TermKind::Lam: {
      const std::string& y = e->name();
      if (y == x) return e;
      const TermPtr& body = e->child(0);
      if (fv_v.count(y) && has_free(body, x)) {
        VarSet avoid = fv_v;
        collect_names(body, avoid);
        avoid.insert(x);
        std::string z = fresh_name(y, avoid);
        TermPtr renamed = subst(body, y, Term::var(z), {z});
        return Term::lam(z, subst(renamed, x, v, fv_v));
      }
      return Term::rebuild(e, {subst(body, x, v, fv_v), nullptr, nullptr});
    }
    default: {
      std::array<TermPtr, 3> kids{};
      for (std::size_t i = 0; i < e->arity(); ++i) kids[i] = subst(e->child(i), x, v, fv_v);
      return Term::rebuild(e, kids);
    }
  }
}

struct AlphaEnv {
  std::vector<const std::string*> left;
  std::vector<const std::string*> right;

  static int index_of(const std::vector<const std::string*>& env, const std::string& n) {
    for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i)
      if (*env[i] == n) return i;
    return -1;
  }
};

bool alpha(const Term& a, const Term& b, AlphaEnv& env) {
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TermKind::Var: {
      int i = AlphaEnv::index_of(env.left, a.name());
      int j = AlphaEnv::index_of(env.right, b.name());
      if (i < 0 && j < 0) return a.name() == b.name();
      return i == j;
    }
    case TermKind::Lit:
      return a.value() == b.value();
    case TermKind::Err:
      return a.name() == b.name();
    case TermKind::Unreachable:
      return true;
    case TermKind::Lam: {
      env.left.push_back(&a.name());
      env.right.push_back(&b.name());
      bool r = alpha(*a.child(0), *b.child(0), env);
      env.left.pop_back();
      env.right.pop_back();
      return r;
    }
    case TermKind::BinOp:
      if (a.op() != b.op()) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!alpha(*a.child(i), *b.child(i), env)) return false;
  return true;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t ahash(const Term& e, std::vector<const std::string*>& env) {
  std::uint64_t h = static_cast<std::uint64_t>(e.kind()) * 0x100000001b3ULL;
  switch (e.kind()) {
    case TermKind::Var: {
      int i = AlphaEnv::index_of(env, e.name());
      if (i >= 0) return mix(h, 0xb0000 + static_cast<std::uint64_t>(env.size() - i));
      return mix(h, std::hash<std::string>{}(e.name()));
    }
    case TermKind::Lit:
      return mix(h, std::hash<std::string>{}(e.value().to_string()) + (e.value().is_bool() ? 7 : 0));
    case TermKind::Err:
      return mix(h, std::hash<std::string>{}(e.name()));
    case TermKind::Lam: {
      env.push_back(&e.name());
      h = mix(h, ahash(*e.child(0), env));
      env.pop_back();
      return h;
    }
    case TermKind::BinOp:
      h = mix(h, static_cast<std::uint64_t>(e.op()) + 11);
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < e.arity(); ++i) h = mix(h, ahash(*e.child(i), env));
  return h;
}

TermPtr canon(const TermPtr& e, std::vector<std::pair<std::string, std::string>>& env,
              std::size_t& counter, const VarSet& frees) {
  switch (e->kind()) {
    case TermKind::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == e->name()) return it->second == e->name() ? e : Term::var(it->second);
      return e;
    case TermKind::Lam: {
      std::string fresh;
      do {
        fresh = "x" + std::to_string(counter++);
      } while (frees.count(fresh));
      env.emplace_back(e->name(), fresh);
      TermPtr body = canon(e->child(0), env, counter, frees);
      env.pop_back();
      return Term::lam(fresh, body);
    }
    default: {
      std::array<TermPtr, 3> kids{};
      for (std::size_t i = 0; i < e->arity(); ++i) kids[i] = canon(e->child(i), env, counter, frees);
      return Term::rebuild(e, kids);
    }
  }
}

}  // namespace

TermPtr substitute(const TermPtr& e, const std::string& x, const TermPtr& v) {
  return subst(e, x, v, free_vars(v));
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  AlphaEnv env;
  return alpha(*a, *b, env);
}

std::uint64_t alpha_hash(const TermPtr& e) {
  std::vector<const std::string*> env;
  return ahash(*e, env);
}

TermPtr canonical(const TermPtr& e) {
  std::vector<std::pair<std::string, std::string>> env;
  std::size_t counter = 0;
  return canon(e, env, counter, free_vars(e));
}

TermPtr subterm_at(const TermPtr& e, const Path& p) {
  TermPtr cur = e;
  for (auto i : p) {
    if (i >= cur->arity()) throw PathError("path " + path_to_string(p) + " leaves the term");
    cur = cur->child(i);
  }
  return cur;
}

bool path_valid(const TermPtr& e, const Path& p) {
  const Term* cur = e.get();
  for (auto i : p) {
    if (i >= cur->arity()) return false;
    cur = cur->child(i).get();
  }
  return true;
}

namespace {

TermPtr replace_rec(const TermPtr& e, const Path& p, std::size_t depth, const TermPtr& sub) {
  if (depth == p.size()) return sub;
  auto i = p[depth];
  if (i >= e->arity()) throw PathError("path " + path_to_string(p) + " leaves the term");
  auto kids = e->children();
  kids[i] = replace_rec(e->child(i), p, depth + 1, sub);
  return Term::rebuild(e, kids);
}

void paths_rec(const TermPtr& e, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  for (std::uint32_t i = 0; i < e->arity(); ++i) {
    cur.push_back(i);
    paths_rec(e->child(i), cur, out);
    cur.pop_back();
  }
}

}  // namespace

TermPtr replace_at(const TermPtr& e, const Path& p, const TermPtr& sub) {
  return replace_rec(e, p, 0, sub);
}

VarSet binders_along(const TermPtr& e, const Path& p) {
  VarSet out;
  TermPtr cur = e;
  for (auto i : p) {
    if (i >= cur->arity()) throw PathError("path " + path_to_string(p) + " leaves the term");
    if (cur->is(TermKind::Lam)) out.insert(cur->name());
    cur = cur->child(i);
  }
  return out;
}

std::vector<Path> all_paths(const TermPtr& e) {
  std::vector<Path> out;
  Path cur;
  paths_rec(e, cur, out);
  return out;
}

std::string path_to_string(const Path& p) {
  if (p.empty()) return ".";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

Path path_from_string(std::string_view s) {
  Path p;
  if (s == ".") return p;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t dot = s.find('.', start);
    std::string_view part = s.substr(start, dot == std::string_view::npos ? s.size() - start : dot - start);
    if (part.empty()) throw std::invalid_argument("malformed path '" + std::string(s) + "'");
    std::uint32_t v = 0;
    for (char c : part) {
      if (c < '0' || c > '9') throw std::invalid_argument("malformed path '" + std::string(s) + "'");
      v = v * 10 + static_cast<std::uint32_t>(c - '0');
    }
    p.push_back(v);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return p;
}

TermPtr desugar_plus_int(const TermPtr& x, const TermPtr& y, const Integer& max, const Integer& min) {
  auto sum = Term::binop(BinOpKind::Add, x, y);
  auto upper = Term::binop(BinOpKind::Lt, Term::integer(max), sum);
  auto lower = Term::binop(BinOpKind::Lt, sum, Term::integer(min));
  return Term::if_(upper, Term::unreachable(), Term::if_(lower, Term::unreachable(), sum));
}

}  // namespace ucalc
