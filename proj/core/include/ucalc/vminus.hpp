#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ucalc/term.hpp"

namespace ucalc::vminus {

// A variable (`%name`) or an integer literal.
struct Operand {
  std::variant<std::string, Const> v;

  static Operand var(std::string name) { return Operand{std::move(name)}; }
  static Operand constant(Integer i) { return Operand{Const::integer(std::move(i))}; }

  bool is_var() const { return std::holds_alternative<std::string>(v); }
  const std::string& name() const { return std::get<std::string>(v); }
  const Const& value() const { return std::get<Const>(v); }
  std::string to_string() const;

  friend bool operator==(const Operand& a, const Operand& b) { return a.v == b.v; }
};

struct Phi {
  std::string target;
  std::vector<std::pair<Operand, std::string>> incoming;

  friend bool operator==(const Phi&, const Phi&) = default;
};

struct Assign {
  std::string target;
  BinOpKind op = BinOpKind::Add;
  Operand lhs;
  Operand rhs;

  friend bool operator==(const Assign&, const Assign&) = default;
};

struct CallError {
  friend bool operator==(const CallError&, const CallError&) = default;
};

using Command = std::variant<Assign, CallError>;

struct Ret {
  Operand value;
  friend bool operator==(const Ret&, const Ret&) = default;
};
struct Br {
  std::string target;
  friend bool operator==(const Br&, const Br&) = default;
};
struct BrCond {
  Operand cond;
  std::string if_true;
  std::string if_false;
  friend bool operator==(const BrCond&, const BrCond&) = default;
};
struct Unreachable {
  friend bool operator==(const Unreachable&, const Unreachable&) = default;
};

using Terminator = std::variant<Ret, Br, BrCond, Unreachable>;

struct Block {
  std::string label;
  std::vector<Phi> phis;
  std::vector<Command> commands;
  Terminator term = Unreachable{};

  friend bool operator==(const Block&, const Block&) = default;
};

// The first block is the entry.
struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<Block> blocks;

  const Block* find(std::string_view label) const;
  Block* find(std::string_view label);
  const Block& entry() const { return blocks.front(); }

  friend bool operator==(const Function&, const Function&) = default;
};

std::vector<std::string> successors(const Block& b);

struct ValidationIssue {
  std::string block;
  std::string message;
};

class VminusError : public std::runtime_error {
 public:
  explicit VminusError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

Function parse_function(std::string_view text);
std::string print_function(const Function& f);
std::string_view op_mnemonic(BinOpKind op);

std::vector<ValidationIssue> check(const Function& f);
// Throws VminusError listing every problem.
void validate(const Function& f);

// Distinct predecessors in block order.
std::vector<std::string> predecessors(const Function& f, std::string_view label);
std::vector<std::string> reachable_blocks(const Function& f);

enum class VKind { Returned, Errored, HitUnreachable, OutOfFuel };

struct VOutcome {
  VKind kind = VKind::OutOfFuel;
  std::optional<Const> value;
  // "user" for call error(), "delta" for an undefined primitive.
  std::string label;
  std::uint64_t steps = 0;

  std::string to_string() const;
  friend bool operator==(const VOutcome& a, const VOutcome& b) {
    return a.kind == b.kind && a.value == b.value && a.label == b.label;
  }
};

// Fuel counts executed phi nodes, commands and terminators.
VOutcome eval_vminus(const Function& f, const std::vector<Integer>& args, std::uint64_t fuel = 10000);

// One application of the unreachable-block simplification to block `l`.
bool simplify_unreachable(Function& f, const std::string& l);
// Applies simplify_unreachable to every unreachable-terminated block until
// nothing changes.
Function simplify_function_cfg(Function f);

}  // namespace ucalc::vminus
