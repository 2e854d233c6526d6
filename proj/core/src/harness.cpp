#include "ucalc/harness.hpp"

#include <json.hpp>
#include <stdexcept>

#include "ucalc/syntax.hpp"

namespace ucalc {

namespace {

std::size_t count_holes(const TermPtr& e) {
  if (e->is(TermKind::Var)) return e->name() == kHoleName ? 1 : 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < e->arity(); ++i) n += count_holes(e->child(i));
  return n;
}

TermPtr plug_rec(const TermPtr& c, const TermPtr& e) {
  if (!(c->name_mask() & name_bit(kHoleName))) return c;
  if (c->is(TermKind::Var)) return c->name() == kHoleName ? e : c;
  std::array<TermPtr, 3> kids{};
  for (std::size_t i = 0; i < c->arity(); ++i) kids[i] = plug_rec(c->child(i), e);
  return Term::rebuild(c, kids);
}

}  // namespace

TermPtr plug(const Context& c, const TermPtr& e) { return plug_rec(c.term, e); }

Context parse_context(std::string_view text) {
  Context c{parse_term(text)};
  if (count_holes(c.term) != 1) throw std::invalid_argument("a context needs exactly one hole []");
  return c;
}

std::string print_context(const Context& c) { return print_term(c.term); }

Context sample_context(const ContextSpec& spec, std::mt19937_64& rng) {
  if (spec.pool.values.empty()) throw std::invalid_argument("sample_context needs a non-empty value pool");
  auto pick_value = [&] {
    std::uniform_int_distribution<std::size_t> d(0, spec.pool.values.size() - 1);
    return spec.pool.values[d(rng)];
  };
  auto small_int = [&] { return Term::integer(std::uniform_int_distribution<int>(-3, 10)(rng)); };

  TermPtr inner = Term::var(std::string(kHoleName));
  const std::size_t frames = std::uniform_int_distribution<std::size_t>(0, spec.max_frames)(rng);
  for (std::size_t i = 0; i < frames; ++i) {
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
      case 0:
        inner = Term::app(inner, pick_value());
        break;
      case 1:
        inner = Term::binop(kAllOps[std::uniform_int_distribution<std::size_t>(0, kAllOps.size() - 1)(rng)],
                            inner, small_int());
        break;
      case 2:
        inner = Term::binop(kAllOps[std::uniform_int_distribution<std::size_t>(0, kAllOps.size() - 1)(rng)],
                            small_int(), inner);
        break;
      case 3:
        inner = Term::if_(inner, small_int(), small_int());
        break;
      default:
        inner = Term::seq(inner, small_int());
        break;
    }
  }
  for (auto it = spec.delta.rbegin(); it != spec.delta.rend(); ++it)
    inner = Term::app(Term::lam(*it, inner), pick_value());
  return Context{inner};
}

Observation observe(const TermPtr& e, Fuel fuel) { return eval(e, fuel); }

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Agree: return "agree";
    case Verdict::VacuousUndef: return "vacuous-undef";
    case Verdict::Disagree: return "disagree";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

Verdict classify(const Observation& lhs, const Observation& rhs, bool unconditional) {
  if (lhs.kind == ObsKind::Timeout || rhs.kind == ObsKind::Timeout) return Verdict::Unknown;
  if (lhs.kind == ObsKind::Undef) {
    if (!unconditional) return Verdict::VacuousUndef;
    return rhs.kind == ObsKind::Undef ? Verdict::Agree : Verdict::Disagree;
  }
  return lhs == rhs ? Verdict::Agree : Verdict::Disagree;
}

HarnessReport compare_terms(const TermPtr& lhs, const TermPtr& rhs, const VarSet& delta,
                            const HarnessConfig& config) {
  if (!is_well_formed(lhs, delta) || !is_well_formed(rhs, delta))
    throw std::invalid_argument("both terms must be well formed under delta");
  HarnessReport report;
  report.lhs_term = lhs;
  report.rhs_term = rhs;
  report.seed = config.seed;
  report.fuel = config.fuel.max_steps;
  report.unconditional = config.unconditional;

  std::mt19937_64 rng(config.seed);
  ContextSpec spec{delta, config.pool, config.max_frames};
  const std::size_t n = config.fixed_contexts.empty() ? config.contexts : config.fixed_contexts.size();
  for (std::size_t i = 0; i < n; ++i) {
    CaseRecord rec;
    rec.index = i;
    rec.context = config.fixed_contexts.empty() ? sample_context(spec, rng) : config.fixed_contexts[i];
    TermPtr l = plug(rec.context, lhs);
    TermPtr r = plug(rec.context, rhs);
    if (!is_closed(l) || !is_closed(r)) throw std::invalid_argument("context does not close the terms");
    rec.lhs = observe(l, config.fuel);
    rec.rhs = observe(r, config.fuel);
    rec.verdict = classify(rec.lhs, rec.rhs, config.unconditional);
    switch (rec.verdict) {
      case Verdict::Agree: ++report.agree; break;
      case Verdict::VacuousUndef: ++report.vacuous; break;
      case Verdict::Disagree: ++report.disagree; break;
      case Verdict::Unknown: ++report.unknown; break;
    }
    report.cases.push_back(std::move(rec));
  }
  return report;
}

HarnessReport check_correctness(const TermPtr& e, const VarSet& delta, const RewriteTrace& trace,
                                const SafetyProvider& safety, const HarnessConfig& config) {
  TermPtr rewritten = apply_trace(e, trace, safety);
  bool has_u = false;
  for (const auto& s : trace) has_u |= is_u_rule(s.rule);
  HarnessConfig cfg = config;
  cfg.unconditional = config.unconditional || !has_u;
  HarnessReport report = compare_terms(e, rewritten, delta, cfg);
  report.trace_text = format_trace(trace);
  return report;
}

std::string HarnessReport::to_jsonl() const {
  std::string out;
  for (const auto& c : cases) {
    nlohmann::ordered_json j;
    j["case"] = c.index;
    j["verdict"] = std::string(verdict_name(c.verdict));
    j["context"] = print_context(c.context);
    j["lhs"] = c.lhs.to_string();
    j["rhs"] = c.rhs.to_string();
    if (c.verdict == Verdict::Disagree) {
      nlohmann::ordered_json b;
      b["term"] = print_term(lhs_term);
      b["rewritten"] = print_term(rhs_term);
      b["trace"] = trace_text;
      b["context"] = print_context(c.context);
      b["fuel"] = fuel;
      b["seed"] = seed;
      b["unconditional"] = unconditional;
      j["bundle"] = b;
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::string HarnessReport::summary() const {
  return "cases=" + std::to_string(cases.size()) + " agree=" + std::to_string(agree) +
         " vacuous-undef=" + std::to_string(vacuous) + " disagree=" + std::to_string(disagree) +
         " unknown=" + std::to_string(unknown) + (unconditional ? " mode=unconditional" : " mode=guarded");
}

}  // namespace ucalc
