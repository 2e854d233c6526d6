#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "ucalc/term.hpp"

namespace ucalc {

// Partial primitive function; nullopt where undefined.
std::optional<Const> delta(BinOpKind op, const Const& a, const Const& b);

struct Fuel {
  std::uint64_t max_steps = 100000;
};

class OpenTermError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ObsKind { Value, Function, Error, Undef, Timeout };

struct Observation {
  ObsKind kind = ObsKind::Timeout;
  std::optional<Const> value;
  std::string label;
  std::uint64_t steps = 0;

  bool is_answer() const { return kind != ObsKind::Timeout; }
  std::string to_string() const;
};

// Compares the observable part only; step counts are ignored.
bool operator==(const Observation& a, const Observation& b);
inline bool operator!=(const Observation& a, const Observation& b) { return !(a == b); }

struct EvalContext {
  TermPtr term;
  Path hole;

  bool empty() const { return hole.empty(); }
  TermPtr plug(const TermPtr& e) const { return replace_at(term, hole, e); }
};

enum class StepRule {
  IfFalse,         // if false a b => b
  IfTrue,          // if v a b => a, v not false
  Beta,            // (lambda x e) v => e[x := v]
  SeqValue,        // seq v e => e
  Delta,           // op c1 c2 => c
  AbortUnreachable,// E[unreachable] => unreachable
  AbortError,      // E[err k] => err k
  BetaError,       // v1 v2 => err beta, v1 not a lambda
  DeltaError       // op v1 v2 => err delta, delta undefined
};

std::string_view step_rule_name(StepRule r);

struct Decomposition {
  EvalContext context;
  TermPtr redex;
  StepRule rule;
};

// Splits a closed non-answer into its unique context and redex.
std::optional<Decomposition> decompose(const TermPtr& e);
TermPtr contract(const Decomposition& d);

// One standard-reduction step; nullopt when `e` is already an answer.
std::optional<TermPtr> step(const TermPtr& e);

Observation eval(const TermPtr& e, Fuel fuel = {});

enum class Tri { Yes, No, Unknown };
Tri is_undef(const TermPtr& e, Fuel fuel = {});

}  // namespace ucalc
