#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ucalc/dominators.hpp"
#include "ucalc/eval.hpp"
#include "ucalc/harness.hpp"
#include "ucalc/rewrite.hpp"
#include "ucalc/term.hpp"
#include "ucalc/vminus.hpp"

namespace ucalc::translate {

// ((lambda (x) body) value)
TermPtr make_let(const std::string& x, const TermPtr& value, const TermPtr& body);

struct LetrecBinding {
  std::string name;
  // Curried parameters; an empty list means one unused parameter.
  std::vector<std::string> params;
  TermPtr body;
};

// Mutually recursive bindings tied with one call-by-value fixpoint built
// from self-application; every binding is a function, so the knot needs no
// special evaluation rule.
TermPtr make_letrec(const std::vector<LetrecBinding>& bindings, const TermPtr& body);

// Block `l` becomes the function bound to `@l`; variables keep their names.
std::string block_function_name(const std::string& label);

TermPtr translate_operand(const vminus::Operand& o);
TermPtr translate_terminator(const vminus::Function& f, const vminus::DomTree& dom, const std::string& l);
TermPtr translate_commands(const vminus::Function& f, const vminus::DomTree& dom, const std::string& l,
                           std::size_t from = 0);
TermPtr translate_block(const vminus::Function& f, const vminus::DomTree& dom, const std::string& l);
// A closed curried lambda over the parameters (one dummy for none).
TermPtr translate_function(const vminus::Function& f);

TermPtr apply_to_inputs(const TermPtr& proc, const std::vector<Integer>& args);

// Returned/value, Errored/error with the same label, HitUnreachable/undef.
bool outcome_matches(const vminus::VOutcome& v, const Observation& o);

struct SimplificationCase {
  std::vector<Integer> inputs;
  Observation before;
  Observation after;
  vminus::VOutcome vm_before;
  vminus::VOutcome vm_after;
  Verdict verdict = Verdict::Unknown;
  // Both translated runs agree with the direct interpreter (or timed out).
  bool commutes = true;
};

struct SimplificationConfig {
  std::size_t samples = 16;
  std::int64_t input_min = -8;
  std::int64_t input_max = 24;
  std::uint64_t seed = 0;
  std::uint64_t vm_fuel = 5000;
  Fuel term_fuel{200000};
  bool search_witness = false;
  SearchBounds bounds{};
};

struct SimplificationReport {
  std::string block;
  vminus::Function before;
  vminus::Function after;
  std::vector<SimplificationCase> cases;
  std::size_t agree = 0;
  std::size_t vacuous = 0;
  std::size_t disagree = 0;
  std::size_t unknown = 0;
  std::size_t commutation_failures = 0;
  bool witness_searched = false;
  std::optional<RewriteTrace> witness;

  std::string to_text() const;
};

// Applies simplify_unreachable to `l` once and compares the translations of
// the function before and after on sampled integer inputs, skipping inputs
// whose original run is undefined.
SimplificationReport check_unreachable_simplification(const vminus::Function& f, const std::string& l,
                                                      const SimplificationConfig& config = {});

}  // namespace ucalc::translate
