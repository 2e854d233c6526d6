#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ucalc/safety.hpp"
#include "ucalc/term.hpp"

namespace ucalc {

// Propagation rules P1-P5 and the general rules M1-M10 hold in both
// directions; the branch-elimination rules U1 and U2 only forward.
enum class Rule { P1, P2, P3, P4, P5, U1, U2, M1, M2, M3, M4, M5, M6, M7, M8, M9, M10 };

enum class Direction { Forward, Backward };

std::string_view rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view s);
bool is_u_rule(Rule r);
// True for rules whose side condition consults a safety provider.
bool uses_safety(Rule r, Direction d);

inline constexpr Rule kAllRules[] = {Rule::P1, Rule::P2, Rule::P3, Rule::P4, Rule::P5, Rule::U1,
                                     Rule::U2, Rule::M1, Rule::M2, Rule::M3, Rule::M4, Rule::M5,
                                     Rule::M6, Rule::M7, Rule::M8, Rule::M9, Rule::M10};

// Forward orientation (left to right):
//   P1  (seq e (unreachable))          -> (unreachable)        Safe(e)
//   P2  (seq (unreachable) e)          -> (unreachable)
//   P3  (e (unreachable)) | (op e (unreachable)) -> (seq e (unreachable))
//   P4  ((unreachable) e)              -> (unreachable)
//   P5  (op (unreachable) e) | (if (unreachable) e e') -> (unreachable)
//   U1  (if e1 e2 (unreachable))       -> (seq e1 e2)
//   U2  (if e1 (unreachable) e3)       -> (seq e1 e3)
//   M1  (if v et ef)                   -> et                   v a value, not false
//   M2  (if false et ef)               -> ef
//   M3  ((lambda (x) e) es)            -> e[x := es]           Safe(es)
//   M4  (seq e e')                     -> e'                   Safe(e)
//   M5  (op c1 c2)                     -> delta(op, c1, c2)
//   M6  E+[(seq e1 e2)]                -> (seq e1 E+[e2])
//   M7  E+[(if e1 e2 e3)]              -> (if e1 E+[e2] E+[e3])
//   M8  (if x et ef)                   -> (if x et ef[x := false])
//   M9  (if (if e v false) et ef)      -> (if e et ef)         v a value, not false
//   M10 (if (= a c1) e1 (if (= a c2) e2 e3)) -> (if (= a c2) e2 (if (= a c1) e1 e3))
// E+ is a non-empty evaluation context whose value positions may also hold
// variables. A backward step names the new subterm as its parameter and
// is checked by rewriting that parameter forward.
struct RewriteStep {
  Rule rule = Rule::P1;
  Direction dir = Direction::Forward;
  Path at;
  std::optional<TermPtr> term_param;
  std::optional<Path> hole_param;
  // Name of the safety provider that validated the step; empty for rules
  // without a safety side condition.
  std::string safety;
};

using RewriteTrace = std::vector<RewriteStep>;

class RewriteError : public std::runtime_error {
 public:
  enum class Kind { NonMatching, SideConditionFailed, IllegalDirection, PathInvalid, BadParam };

  RewriteError(Kind kind, const std::string& msg, std::optional<std::size_t> step = std::nullopt);
  Kind kind() const { return kind_; }
  std::optional<std::size_t> step_index() const { return step_; }

 private:
  Kind kind_;
  std::optional<std::size_t> step_;
};

std::string_view rewrite_error_name(RewriteError::Kind k);

TermPtr apply_rule(const TermPtr& e, const RewriteStep& step, const SafetyProvider& safety);
TermPtr apply_trace(const TermPtr& e, const RewriteTrace& trace, const SafetyProvider& safety);

// One line per step: RULE DIR PATH [PARAM-SEXPR] [; safety=NAME]
std::string format_step(const RewriteStep& s);
std::string format_trace(const RewriteTrace& t);
RewriteStep parse_step(std::string_view line);
RewriteTrace parse_trace(std::string_view text);

struct EnumerationBudget {
  std::size_t max_instances = 4096;
  // Operands tried when expanding a constant backward through M5.
  int preimage_radius = 2;
};

struct RuleInstance {
  RewriteStep step;
  // Templates still need a term parameter before they can be applied.
  bool is_template = false;
  std::string note;
};

std::vector<RuleInstance> applicable_rules(const TermPtr& e, const SafetyProvider& safety,
                                           const EnumerationBudget& budget = {});

struct Normalized {
  TermPtr term;
  RewriteTrace trace;
};

// Forward U and P rules plus M4 drops of safe sequence heads, innermost
// first, to a fixpoint.
Normalized normalize_unreachable(const TermPtr& e, const SafetyProvider& safety);

struct SearchBounds {
  std::size_t depth = 12;
  std::size_t width = 64;
  std::size_t max_expansions = 2000;
};

// Best-first search for a replayable trace from `e` to a term alpha-equal
// to `target`.
std::optional<RewriteTrace> search_equiv(const TermPtr& e, const TermPtr& target,
                                         const SearchBounds& bounds, const SafetyProvider& safety);

// Aligned structural distance used to rank search candidates; 0 iff alpha-equal.
std::size_t term_distance(const TermPtr& a, const TermPtr& b);

}  // namespace ucalc
