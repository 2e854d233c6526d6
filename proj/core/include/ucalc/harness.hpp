#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ucalc/eval.hpp"
#include "ucalc/rewrite.hpp"
#include "ucalc/safety.hpp"
#include "ucalc/term.hpp"

namespace ucalc {

// A term with exactly one occurrence of the hole variable `[]`. Plugging
// does not rename, so the context may bind free variables of the filler.
struct Context {
  TermPtr term;
};

inline constexpr std::string_view kHoleName = "[]";

TermPtr plug(const Context& c, const TermPtr& e);
Context parse_context(std::string_view text);
std::string print_context(const Context& c);

struct ContextSpec {
  VarSet delta;
  ValuePool pool = ValuePool::standard();
  std::size_t max_frames = 2;
};

// Binds every variable of `delta` to a pool value and wraps the hole in up
// to `max_frames` frames that consume its result.
Context sample_context(const ContextSpec& spec, std::mt19937_64& rng);

Observation observe(const TermPtr& e, Fuel fuel);

enum class Verdict { Agree, VacuousUndef, Disagree, Unknown };
std::string_view verdict_name(Verdict v);

struct HarnessConfig {
  Fuel fuel{10000};
  std::size_t contexts = 20;
  std::uint64_t seed = 0;
  ValuePool pool = ValuePool::standard();
  std::size_t max_frames = 2;
  // Also demand that an undefined left side stays undefined.
  bool unconditional = false;
  // Used instead of sampling when non-empty.
  std::vector<Context> fixed_contexts;
};

struct CaseRecord {
  std::size_t index = 0;
  Context context;
  Observation lhs;
  Observation rhs;
  Verdict verdict = Verdict::Unknown;
};

struct HarnessReport {
  TermPtr lhs_term;
  TermPtr rhs_term;
  std::string trace_text;
  std::uint64_t seed = 0;
  std::uint64_t fuel = 0;
  bool unconditional = false;
  std::vector<CaseRecord> cases;
  std::size_t agree = 0;
  std::size_t vacuous = 0;
  std::size_t disagree = 0;
  std::size_t unknown = 0;

  // One JSON object per case; disagreements carry a replay bundle.
  std::string to_jsonl() const;
  std::string summary() const;
};

Verdict classify(const Observation& lhs, const Observation& rhs, bool unconditional);

HarnessReport compare_terms(const TermPtr& lhs, const TermPtr& rhs, const VarSet& delta,
                            const HarnessConfig& config);

// Replays `trace` on `e` and compares both sides in sampled closing
// contexts. Traces without U steps are checked unconditionally.
HarnessReport check_correctness(const TermPtr& e, const VarSet& delta, const RewriteTrace& trace,
                                const SafetyProvider& safety, const HarnessConfig& config);

}  // namespace ucalc
