#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ucalc/eval.hpp"
#include "ucalc/term.hpp"

namespace ucalc {

enum class Safety { Safe, Unsafe, Unknown };

std::string_view safety_name(Safety s);

using Substitution = std::vector<std::pair<std::string, TermPtr>>;

TermPtr apply_substitution(const TermPtr& e, const Substitution& s);

struct SafetyVerdict {
  Safety verdict = Safety::Unknown;
  std::optional<Substitution> witness;
  std::optional<Observation> witness_observation;
};

// Sound, incomplete: values, variables, and if/seq/binop built from safe
// parts whose binop operands are literal constants with delta defined.
SafetyVerdict safe_syntactic(const TermPtr& e);

// Sound when every free variable is an integer: a type check that rejects
// any primitive application that could be undefined.
SafetyVerdict safe_integer_mode(const TermPtr& e);

struct ValuePool {
  std::vector<TermPtr> values;

  static ValuePool standard();
  static ValuePool integers();
  static ValuePool booleans();
};

// Sampling refuter: Unsafe with a witness if some closing substitution
// reaches a non-value, Unknown otherwise. Never answers Safe.
SafetyVerdict safe_oracle(const TermPtr& e, const VarSet& delta, std::size_t samples, Fuel fuel,
                          std::uint64_t seed, const ValuePool& pool = ValuePool::standard());

class SafetyProvider {
 public:
  virtual ~SafetyProvider() = default;
  virtual bool is_safe(const TermPtr& e) const = 0;
  virtual std::string_view name() const = 0;
};

const SafetyProvider& syntactic_safety();
const SafetyProvider& integer_safety();
// Accepts "syntactic" and "integer"; throws std::invalid_argument otherwise.
const SafetyProvider& safety_by_name(std::string_view name);

}  // namespace ucalc
