#include "ucalc/translate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "ucalc/syntax.hpp"

namespace ucalc::translate {

using namespace ucalc::vminus;

TermPtr make_let(const std::string& x, const TermPtr& value, const TermPtr& body) {
  return Term::app(Term::lam(x, body), value);
}

namespace {

TermPtr curried(const std::vector<std::string>& params, const TermPtr& body) {
  if (params.empty()) return Term::lam("_", body);
  TermPtr out = body;
  for (auto it = params.rbegin(); it != params.rend(); ++it) out = Term::lam(*it, out);
  return out;
}

TermPtr apply_all(TermPtr fn, const std::vector<TermPtr>& args) {
  for (const auto& a : args) fn = Term::app(fn, a);
  return fn;
}

std::string unused(const std::string& base, const VarSet& taken) {
  return taken.count(base) ? fresh_name(base, taken) : base;
}

}  // namespace

TermPtr make_letrec(const std::vector<LetrecBinding>& bindings, const TermPtr& body) {
  if (bindings.empty()) return body;
  VarSet taken = all_names(body);
  for (const auto& b : bindings) {
    VarSet n = all_names(b.body);
    taken.insert(n.begin(), n.end());
    taken.insert(b.name);
    taken.insert(b.params.begin(), b.params.end());
  }
  const std::size_t m = bindings.size();
  std::vector<std::string> self(m), knot(m);
  for (std::size_t i = 0; i < m; ++i) {
    self[i] = unused("#s." + bindings[i].name, taken);
    taken.insert(self[i]);
    knot[i] = unused("#h." + bindings[i].name, taken);
    taken.insert(knot[i]);
  }
  const std::string arg = unused("#a", taken);

  std::vector<TermPtr> self_vars;
  for (const auto& s : self) self_vars.push_back(Term::var(s));
  // Eta-expanded self-application keeps each recursive reference a value.
  std::vector<TermPtr> wrappers;
  for (std::size_t j = 0; j < m; ++j)
    wrappers.push_back(Term::lam(arg, Term::app(apply_all(Term::var(self[j]), self_vars), Term::var(arg))));

  std::vector<TermPtr> knots;
  for (std::size_t i = 0; i < m; ++i) {
    TermPtr fn = curried(bindings[i].params, bindings[i].body);
    for (std::size_t j = m; j-- > 0;) fn = Term::lam(bindings[j].name, fn);
    TermPtr tied = apply_all(fn, wrappers);
    for (std::size_t j = m; j-- > 0;) tied = Term::lam(self[j], tied);
    knots.push_back(tied);
  }

  std::vector<TermPtr> knot_vars;
  for (const auto& h : knot) knot_vars.push_back(Term::var(h));
  TermPtr out = body;
  for (std::size_t i = m; i-- > 0;) out = make_let(bindings[i].name, apply_all(Term::var(knot[i]), knot_vars), out);
  for (std::size_t i = m; i-- > 0;) out = make_let(knot[i], knots[i], out);
  return out;
}

std::string block_function_name(const std::string& label) { return "@" + label; }

TermPtr translate_operand(const Operand& o) {
  return o.is_var() ? Term::var(o.name()) : Term::lit(o.value());
}

namespace {

const Block& block_of(const Function& f, const std::string& l) {
  const Block* b = f.find(l);
  if (!b) throw std::invalid_argument("no block named " + l);
  return *b;
}

TermPtr jump(const Function& f, const std::string& target, const std::string& from) {
  const Block& t = block_of(f, target);
  std::vector<TermPtr> args;
  for (const auto& p : t.phis) {
    const Operand* v = nullptr;
    for (const auto& [val, pred] : p.incoming)
      if (pred == from) v = &val;
    if (!v) throw std::invalid_argument("phi " + p.target + " in " + target + " has no value for " + from);
    args.push_back(translate_operand(*v));
  }
  if (args.empty()) args.push_back(Term::integer(0));
  return apply_all(Term::var(block_function_name(target)), args);
}

std::vector<std::string> phi_params(const Block& b) {
  std::vector<std::string> out;
  for (const auto& p : b.phis) out.push_back(p.target);
  return out;
}

// Binds the dominator-tree children of `l` around `inner`: each strongly
// connected group of mutually jumping siblings gets one fixpoint, and a
// sibling that no other sibling in its group reaches is a plain let.
TermPtr bind_children(const Function& f, const DomTree& dom, const std::string& l, const TermPtr& inner) {
  const auto& kids = dom.children(l);
  if (kids.empty()) return inner;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < kids.size(); ++i) index[kids[i]] = i;

  std::vector<std::vector<std::size_t>> refs(kids.size());
  for (std::size_t i = 0; i < kids.size(); ++i) {
    std::set<std::size_t> seen;
    std::vector<std::string> stack{kids[i]};
    while (!stack.empty()) {
      std::string b = stack.back();
      stack.pop_back();
      for (const auto& s : successors(block_of(f, b))) {
        auto it = index.find(s);
        if (it != index.end() && seen.insert(it->second).second) refs[i].push_back(it->second);
      }
      for (const auto& c : dom.children(b)) stack.push_back(c);
    }
    std::sort(refs[i].begin(), refs[i].end());
  }

  // Tarjan's algorithm emits each component after the components it uses.
  const std::size_t n = kids.size();
  std::vector<int> num(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> groups;
  int counter = 0;
  std::function<void(std::size_t)> connect = [&](std::size_t v) {
    num[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : refs[v]) {
      if (num[w] < 0) {
        connect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], num[w]);
      }
    }
    if (low[v] == num[v]) {
      std::vector<std::size_t> g;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        g.push_back(w);
      } while (w != v);
      std::sort(g.begin(), g.end());
      groups.push_back(std::move(g));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (num[v] < 0) connect(v);

  TermPtr out = inner;
  for (auto g = groups.rbegin(); g != groups.rend(); ++g) {
    const bool self_loop = g->size() == 1 && std::count(refs[(*g)[0]].begin(), refs[(*g)[0]].end(), (*g)[0]) > 0;
    if (g->size() == 1 && !self_loop) {
      const std::string& c = kids[(*g)[0]];
      out = make_let(block_function_name(c), translate_block(f, dom, c), out);
      continue;
    }
    std::vector<LetrecBinding> bindings;
    for (std::size_t i : *g) {
      const Block& b = block_of(f, kids[i]);
      bindings.push_back(LetrecBinding{block_function_name(b.label), phi_params(b),
                                       translate_commands(f, dom, b.label)});
    }
    out = make_letrec(bindings, out);
  }
  return out;
}

}  // namespace

TermPtr translate_terminator(const Function& f, const DomTree&, const std::string& l) {
  const Block& b = block_of(f, l);
  if (const auto* r = std::get_if<Ret>(&b.term)) return translate_operand(r->value);
  if (const auto* br = std::get_if<Br>(&b.term)) return jump(f, br->target, l);
  if (const auto* bc = std::get_if<BrCond>(&b.term))
    return Term::if_(translate_operand(bc->cond), jump(f, bc->if_true, l), jump(f, bc->if_false, l));
  return Term::unreachable();
}

TermPtr translate_commands(const Function& f, const DomTree& dom, const std::string& l, std::size_t from) {
  const Block& b = block_of(f, l);
  if (from >= b.commands.size()) return bind_children(f, dom, l, translate_terminator(f, dom, l));
  const Command& c = b.commands[from];
  if (std::holds_alternative<CallError>(c)) return Term::err("user");
  const auto& a = std::get<Assign>(c);
  return make_let(a.target, Term::binop(a.op, translate_operand(a.lhs), translate_operand(a.rhs)),
                  translate_commands(f, dom, l, from + 1));
}

TermPtr translate_block(const Function& f, const DomTree& dom, const std::string& l) {
  return curried(phi_params(block_of(f, l)), translate_commands(f, dom, l));
}

TermPtr translate_function(const Function& f) {
  validate(f);
  DomTree dom = compute_dominators(f);
  return curried(f.params, translate_commands(f, dom, f.entry().label));
}

TermPtr apply_to_inputs(const TermPtr& proc, const std::vector<Integer>& args) {
  if (args.empty()) return Term::app(proc, Term::integer(0));
  std::vector<TermPtr> xs;
  for (const auto& a : args) xs.push_back(Term::integer(a));
  return apply_all(proc, xs);
}

bool outcome_matches(const VOutcome& v, const Observation& o) {
  switch (v.kind) {
    case VKind::Returned: return o.kind == ObsKind::Value && *o.value == *v.value;
    case VKind::Errored: return o.kind == ObsKind::Error && o.label == v.label;
    case VKind::HitUnreachable: return o.kind == ObsKind::Undef;
    case VKind::OutOfFuel: return false;
  }
  return false;
}

SimplificationReport check_unreachable_simplification(const Function& f, const std::string& l,
                                                      const SimplificationConfig& config) {
  validate(f);
  const Block* b = f.find(l);
  if (!b) throw std::invalid_argument("no block named " + l);
  if (!std::holds_alternative<Unreachable>(b->term))
    throw std::invalid_argument("block " + l + " does not end in unreachable");
  if (!compute_dominators(f).reachable(l)) throw std::invalid_argument("block " + l + " is not reachable");

  SimplificationReport report;
  report.block = l;
  report.before = f;
  report.after = f;
  simplify_unreachable(report.after, l);
  validate(report.after);
  TermPtr before = translate_function(report.before);
  TermPtr after = translate_function(report.after);

  std::vector<std::vector<Integer>> inputs;
  const std::size_t k = f.params.size();
  if (k == 0) {
    inputs.push_back({});
  } else {
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<std::int64_t> dist(config.input_min, config.input_max);
    for (std::size_t i = 0; i < config.samples; ++i) {
      std::vector<Integer> in;
      for (std::size_t j = 0; j < k; ++j) in.emplace_back(dist(rng));
      inputs.push_back(std::move(in));
    }
  }

  for (auto& in : inputs) {
    SimplificationCase c;
    c.inputs = in;
    c.before = eval(apply_to_inputs(before, in), config.term_fuel);
    c.vm_before = eval_vminus(report.before, in, config.vm_fuel);
    if (c.before.kind == ObsKind::Undef) {
      c.verdict = Verdict::VacuousUndef;
    } else if (c.before.kind == ObsKind::Timeout) {
      c.verdict = Verdict::Unknown;
    } else {
      c.after = eval(apply_to_inputs(after, in), config.term_fuel);
      c.vm_after = eval_vminus(report.after, in, config.vm_fuel);
      c.verdict = classify(c.before, c.after, false);
    }
    auto commutes = [](const VOutcome& v, const Observation& o) {
      if (v.kind == VKind::OutOfFuel || o.kind == ObsKind::Timeout) return true;
      return outcome_matches(v, o);
    };
    c.commutes = commutes(c.vm_before, c.before);
    if (c.verdict == Verdict::Agree || c.verdict == Verdict::Disagree) c.commutes &= commutes(c.vm_after, c.after);
    switch (c.verdict) {
      case Verdict::Agree: ++report.agree; break;
      case Verdict::VacuousUndef: ++report.vacuous; break;
      case Verdict::Disagree: ++report.disagree; break;
      case Verdict::Unknown: ++report.unknown; break;
    }
    if (!c.commutes) ++report.commutation_failures;
    report.cases.push_back(std::move(c));
  }

  if (config.search_witness) {
    report.witness_searched = true;
    report.witness = search_equiv(before, after, config.bounds, integer_safety());
  }
  return report;
}

std::string SimplificationReport::to_text() const {
  std::string out;
  for (const auto& c : cases) {
    out += "input (";
    for (std::size_t i = 0; i < c.inputs.size(); ++i) out += (i ? " " : "") + c.inputs[i].str();
    out += ") before=" + c.before.to_string();
    if (c.verdict == Verdict::Agree || c.verdict == Verdict::Disagree) out += " after=" + c.after.to_string();
    out += " verdict=" + std::string(verdict_name(c.verdict));
    if (!c.commutes) out += " commutation=FAIL";
    out += "\n";
  }
  out += "block=" + block + " cases=" + std::to_string(cases.size()) + " agree=" + std::to_string(agree) +
         " vacuous-undef=" + std::to_string(vacuous) + " disagree=" + std::to_string(disagree) +
         " unknown=" + std::to_string(unknown) + " commutation-failures=" + std::to_string(commutation_failures) +
         "\n";
  if (witness_searched) {
    if (witness) {
      out += "witness steps=" + std::to_string(witness->size()) + "\n" + format_trace(*witness);
    } else {
      out += "witness none within bounds\n";
    }
  }
  return out;
}

}  // namespace ucalc::translate
