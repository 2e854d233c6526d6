#include "ucalc/rewrite.hpp"

#include <cctype>
#include <sstream>

#include "ucalc/eval.hpp"
#include "rewrite_internal.hpp"
#include "ucalc/syntax.hpp"

namespace ucalc {

namespace {

constexpr std::string_view kRuleNames[] = {"P1", "P2", "P3", "P4", "P5", "U1", "U2", "M1", "M2",
                                           "M3", "M4", "M5", "M6", "M7", "M8", "M9", "M10"};

}  // namespace

std::string_view rule_name(Rule r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<Rule> rule_from_name(std::string_view s) {
  for (Rule r : kAllRules)
    if (rule_name(r) == s) return r;
  return std::nullopt;
}

bool is_u_rule(Rule r) { return r == Rule::U1 || r == Rule::U2; }

bool uses_safety(Rule r, Direction) { return r == Rule::P1 || r == Rule::M3 || r == Rule::M4; }

RewriteError::RewriteError(Kind kind, const std::string& msg, std::optional<std::size_t> step)
    : std::runtime_error(std::string(rewrite_error_name(kind)) + ": " + msg), kind_(kind), step_(step) {}

std::string_view rewrite_error_name(RewriteError::Kind k) {
  switch (k) {
    case RewriteError::Kind::NonMatching: return "NonMatching";
    case RewriteError::Kind::SideConditionFailed: return "SideConditionFailed";
    case RewriteError::Kind::IllegalDirection: return "IllegalDirection";
    case RewriteError::Kind::PathInvalid: return "PathInvalid";
    case RewriteError::Kind::BadParam: return "BadParam";
  }
  return "?";
}

namespace detail {

namespace {

using K = RewriteError::Kind;

Outcome no(std::string msg) { return Outcome{nullptr, K::NonMatching, std::move(msg)}; }
Outcome side(std::string msg) { return Outcome{nullptr, K::SideConditionFailed, std::move(msg)}; }
Outcome yes(TermPtr t) { return Outcome{std::move(t), K::NonMatching, {}}; }

bool is_value_plus(const Term& e) { return is_value(e) || e.is(TermKind::Var); }

bool is_false(const Term& e) {
  return e.is(TermKind::Lit) && e.value().is_bool() && !e.value().as_bool();
}

bool truthy_value(const Term& e) { return is_value(e) && !is_false(e); }

// Index of the child an extended evaluation context continues into.
std::optional<std::uint32_t> spine_child(const Term& e) {
  switch (e.kind()) {
    case TermKind::App:
    case TermKind::BinOp:
      if (!is_value_plus(*e.child(0))) return 0;
      if (!is_value_plus(*e.child(1))) return 1;
      return std::nullopt;
    case TermKind::If:
    case TermKind::Seq:
      return 0;
    default:
      return std::nullopt;
  }
}

TermPtr unreachable_node() { return Term::unreachable(); }

bool is_unr(const TermPtr& e) { return e->is(TermKind::Unreachable); }

}  // namespace

std::vector<Path> eplus_spine(const TermPtr& s) {
  std::vector<Path> out;
  Path p;
  const Term* cur = s.get();
  while (auto i = spine_child(*cur)) {
    p.push_back(*i);
    cur = cur->child(*i).get();
    out.push_back(p);
  }
  return out;
}

std::vector<Path> eplus_holes(const TermPtr& s, TermKind want) {
  std::vector<Path> out;
  for (const auto& p : eplus_spine(s))
    if (subterm_at(s, p)->is(want)) out.push_back(p);
  return out;
}

Outcome forward(Rule rule, const TermPtr& s, const std::optional<Path>& hole, const SafetyProvider& safety) {
  switch (rule) {
    case Rule::P1:
      if (!s->is(TermKind::Seq) || !is_unr(s->child(1))) return no("P1 expects (seq e (unreachable))");
      if (!safety.is_safe(s->child(0))) return side("P1 needs a safe sequence head");
      return yes(unreachable_node());
    case Rule::P2:
      if (!s->is(TermKind::Seq) || !is_unr(s->child(0))) return no("P2 expects (seq (unreachable) e)");
      return yes(unreachable_node());
    case Rule::P3:
      if ((!s->is(TermKind::App) && !s->is(TermKind::BinOp)) || !is_unr(s->child(1)))
        return no("P3 expects an application or primitive with unreachable operand");
      return yes(Term::seq(s->child(0), unreachable_node()));
    case Rule::P4:
      if (!s->is(TermKind::App) || !is_unr(s->child(0))) return no("P4 expects ((unreachable) e)");
      return yes(unreachable_node());
    case Rule::P5:
      if ((!s->is(TermKind::BinOp) && !s->is(TermKind::If)) || !is_unr(s->child(0)))
        return no("P5 expects a primitive or conditional on unreachable");
      return yes(unreachable_node());
    case Rule::U1:
      if (!s->is(TermKind::If) || !is_unr(s->child(2))) return no("U1 expects (if e1 e2 (unreachable))");
      return yes(Term::seq(s->child(0), s->child(1)));
    case Rule::U2:
      if (!s->is(TermKind::If) || !is_unr(s->child(1))) return no("U2 expects (if e1 (unreachable) e3)");
      return yes(Term::seq(s->child(0), s->child(2)));
    case Rule::M1:
      if (!s->is(TermKind::If) || !truthy_value(*s->child(0)))
        return no("M1 expects a conditional on a non-false value");
      return yes(s->child(1));
    case Rule::M2:
      if (!s->is(TermKind::If) || !is_false(*s->child(0))) return no("M2 expects a conditional on false");
      return yes(s->child(2));
    case Rule::M3:
      if (!s->is(TermKind::App) || !s->child(0)->is(TermKind::Lam))
        return no("M3 expects ((lambda (x) e) es)");
      if (!safety.is_safe(s->child(1))) return side("M3 needs a safe argument");
      return yes(substitute(s->child(0)->child(0), s->child(0)->name(), s->child(1)));
    case Rule::M4:
      if (!s->is(TermKind::Seq)) return no("M4 expects (seq e e')");
      if (!safety.is_safe(s->child(0))) return side("M4 needs a safe sequence head");
      return yes(s->child(1));
    case Rule::M5: {
      if (!s->is(TermKind::BinOp) || !s->child(0)->is(TermKind::Lit) || !s->child(1)->is(TermKind::Lit))
        return no("M5 expects a primitive on two constants");
      auto c = delta(s->op(), s->child(0)->value(), s->child(1)->value());
      if (!c) return side("M5 needs the primitive to be defined");
      return yes(Term::lit(*c));
    }
    case Rule::M6:
    case Rule::M7: {
      const TermKind want = rule == Rule::M6 ? TermKind::Seq : TermKind::If;
      auto holes = eplus_holes(s, want);
      if (holes.empty()) return no(std::string(rule_name(rule)) + " finds no redex in an extended context");
      Path h = holes.front();
      if (hole) {
        bool ok = false;
        for (const auto& c : holes) ok |= c == *hole;
        if (!ok) return no("hole " + path_to_string(*hole) + " is not an extended-context position");
        h = *hole;
      }
      TermPtr inner = subterm_at(s, h);
      if (rule == Rule::M6) return yes(Term::seq(inner->child(0), replace_at(s, h, inner->child(1))));
      return yes(Term::if_(inner->child(0), replace_at(s, h, inner->child(1)), replace_at(s, h, inner->child(2))));
    }
    case Rule::M8:
      if (!s->is(TermKind::If) || !s->child(0)->is(TermKind::Var)) return no("M8 expects (if x et ef)");
      return yes(Term::if_(s->child(0), s->child(1),
                           substitute(s->child(2), s->child(0)->name(), Term::boolean(false))));
    case Rule::M9: {
      if (!s->is(TermKind::If) || !s->child(0)->is(TermKind::If)) return no("M9 expects a nested test");
      const TermPtr& t = s->child(0);
      if (!truthy_value(*t->child(1)) || !is_false(*t->child(2)))
        return no("M9 expects the inner arms to be a non-false value and false");
      return yes(Term::if_(t->child(0), s->child(1), s->child(2)));
    }
    case Rule::M10: {
      auto is_eq_test = [](const TermPtr& t) {
        return t->is(TermKind::BinOp) && t->op() == BinOpKind::Eq && is_value_plus(*t->child(0)) &&
               t->child(1)->is(TermKind::Lit);
      };
      if (!s->is(TermKind::If) || !s->child(2)->is(TermKind::If) || !is_eq_test(s->child(0)) ||
          !is_eq_test(s->child(2)->child(0)))
        return no("M10 expects two nested equality tests against constants");
      const TermPtr& t1 = s->child(0);
      const TermPtr& inner = s->child(2);
      const TermPtr& t2 = inner->child(0);
      if (!alpha_eq(t1->child(0), t2->child(0))) return no("M10 expects both tests on the same operand");
      const Const& c1 = t1->child(1)->value();
      const Const& c2 = t2->child(1)->value();
      if (c1.is_int() != c2.is_int()) return side("M10 needs constants of the same sort");
      if (c1 == c2 && !alpha_eq(s->child(1), inner->child(1)))
        return side("M10 needs distinct constants or identical branches");
      return yes(Term::if_(t2, inner->child(1), Term::if_(t1, s->child(1), inner->child(2))));
    }
  }
  return no("unknown rule");
}

Outcome backward(Rule rule, const TermPtr& s, const std::optional<TermPtr>& param, const VarSet& ambient,
                 const SafetyProvider& safety) {
  if (is_u_rule(rule))
    return Outcome{nullptr, K::IllegalDirection, std::string(rule_name(rule)) + " is not sound in reverse"};
  if (!param) {
    if (rule == Rule::M10) return forward(rule, s, std::nullopt, safety);
    return Outcome{nullptr, K::BadParam, "backward " + std::string(rule_name(rule)) + " needs a term parameter"};
  }
  const TermPtr& t = *param;
  for (const auto& x : free_vars(t))
    if (!ambient.count(x)) return side("parameter mentions '" + x + "', which is not in scope");
  if (rule == Rule::M6 || rule == Rule::M7) {
    for (const auto& h : eplus_holes(t, rule == Rule::M6 ? TermKind::Seq : TermKind::If)) {
      Outcome o = forward(rule, t, h, safety);
      if (o && alpha_eq(o.term, s)) return yes(t);
    }
    return no("parameter does not rewrite to the current subterm");
  }
  Outcome o = forward(rule, t, std::nullopt, safety);
  if (!o) {
    if (o.kind == K::SideConditionFailed) return o;
    return no("parameter does not match the rule: " + o.msg);
  }
  if (!alpha_eq(o.term, s)) return no("parameter does not rewrite to the current subterm");
  return yes(t);
}

}  // namespace detail

TermPtr apply_rule(const TermPtr& e, const RewriteStep& step, const SafetyProvider& safety) {
  if (!path_valid(e, step.at))
    throw RewriteError(RewriteError::Kind::PathInvalid, "path " + path_to_string(step.at) + " leaves the term");
  const SafetyProvider* provider = &safety;
  if (!step.safety.empty()) {
    try {
      provider = &safety_by_name(step.safety);
    } catch (const std::invalid_argument& ex) {
      throw RewriteError(RewriteError::Kind::BadParam, ex.what());
    }
  }
  TermPtr s = subterm_at(e, step.at);
  detail::Outcome o;
  if (step.dir == Direction::Forward) {
    if (step.term_param)
      throw RewriteError(RewriteError::Kind::BadParam,
                         "forward " + std::string(rule_name(step.rule)) + " takes no term parameter");
    o = detail::forward(step.rule, s, step.hole_param, *provider);
  } else {
    if (step.hole_param) throw RewriteError(RewriteError::Kind::BadParam, "backward steps take no hole parameter");
    VarSet ambient = binders_along(e, step.at);
    for (const auto& x : free_vars(e)) ambient.insert(x);
    o = detail::backward(step.rule, s, step.term_param, ambient, *provider);
  }
  if (!o) throw RewriteError(o.kind, o.msg);
  return replace_at(e, step.at, o.term);
}

TermPtr apply_trace(const TermPtr& e, const RewriteTrace& trace, const SafetyProvider& safety) {
  TermPtr cur = e;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    try {
      cur = apply_rule(cur, trace[i], safety);
    } catch (const RewriteError& ex) {
      std::string msg = ex.what();
      msg.erase(0, rewrite_error_name(ex.kind()).size() + 2);
      throw RewriteError(ex.kind(), "step " + std::to_string(i) + " (" + format_step(trace[i]) + "): " + msg, i);
    }
  }
  return cur;
}

std::string format_step(const RewriteStep& s) {
  std::string out(rule_name(s.rule));
  out += s.dir == Direction::Forward ? " fwd " : " bwd ";
  out += path_to_string(s.at);
  if (s.term_param) out += " " + print_term(*s.term_param);
  if (s.hole_param) {
    out += " (hole";
    for (auto i : *s.hole_param) out += " " + std::to_string(i);
    out += ")";
  }
  if (!s.safety.empty()) out += " ; safety=" + s.safety;
  return out;
}

std::string format_trace(const RewriteTrace& t) {
  std::string out;
  for (const auto& s : t) out += format_step(s) + "\n";
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view next_word(std::string_view& s) {
  s = trim(s);
  std::size_t end = 0;
  while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
  std::string_view w = s.substr(0, end);
  s.remove_prefix(end);
  return w;
}

[[noreturn]] void bad_line(std::string_view line, const std::string& why) {
  throw std::invalid_argument("bad trace line '" + std::string(line) + "': " + why);
}

}  // namespace

RewriteStep parse_step(std::string_view line) {
  std::string_view body = line;
  std::string safety;
  if (auto semi = line.find(';'); semi != std::string_view::npos) {
    body = line.substr(0, semi);
    std::string_view comment = trim(line.substr(semi + 1));
    if (comment.rfind("safety=", 0) == 0) safety = std::string(trim(comment.substr(7)));
  }
  RewriteStep step;
  step.safety = safety;
  std::string_view rest = body;
  auto rule = rule_from_name(next_word(rest));
  if (!rule) bad_line(line, "unknown rule");
  step.rule = *rule;
  std::string_view dir = next_word(rest);
  if (dir == "fwd") {
    step.dir = Direction::Forward;
  } else if (dir == "bwd") {
    step.dir = Direction::Backward;
  } else {
    bad_line(line, "direction must be fwd or bwd");
  }
  std::string_view path = next_word(rest);
  if (path.empty()) bad_line(line, "missing path");
  try {
    step.at = path_from_string(path);
  } catch (const std::invalid_argument& ex) {
    bad_line(line, ex.what());
  }
  rest = trim(rest);
  if (!rest.empty()) {
    Sexp sx = read_one_sexp(rest);
    if (sx.kind == Sexp::Kind::List && !sx.items.empty() && sx.items[0].kind == Sexp::Kind::Atom &&
        sx.items[0].atom == "hole") {
      Path h;
      for (std::size_t i = 1; i < sx.items.size(); ++i) {
        if (sx.items[i].kind != Sexp::Kind::Atom || !is_int_token(sx.items[i].atom) || sx.items[i].atom[0] == '-')
          bad_line(line, "hole indices must be natural numbers");
        h.push_back(static_cast<std::uint32_t>(std::stoul(sx.items[i].atom)));
      }
      step.hole_param = h;
    } else {
      step.term_param = term_from_sexp(sx);
    }
  }
  return step;
}

RewriteTrace parse_trace(std::string_view text) {
  RewriteTrace out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (t.empty() || t.front() == ';' || t.front() == '#') continue;
    out.push_back(parse_step(t));
  }
  return out;
}

}  // namespace ucalc
