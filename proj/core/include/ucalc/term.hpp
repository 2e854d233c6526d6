#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ucalc {

using Integer = boost::multiprecision::cpp_int;

class Const {
 public:
  static Const integer(Integer v) { return Const(std::move(v)); }
  static Const boolean(bool b) { return Const(b); }

  bool is_int() const { return std::holds_alternative<Integer>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  const Integer& as_int() const { return std::get<Integer>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }

  // Only the boolean false selects the else branch.
  bool truthy() const { return !(is_bool() && !as_bool()); }

  std::string to_string() const;

  friend bool operator==(const Const& a, const Const& b) { return a.v_ == b.v_; }

 private:
  explicit Const(Integer v) : v_(std::move(v)) {}
  explicit Const(bool b) : v_(b) {}
  std::variant<Integer, bool> v_;
};

enum class BinOpKind : std::uint8_t { Add, Sub, Mul, Lt, Le, Eq, Ne };

std::string_view op_symbol(BinOpKind op);
std::optional<BinOpKind> op_from_symbol(std::string_view s);
inline constexpr std::array<BinOpKind, 7> kAllOps = {
    BinOpKind::Add, BinOpKind::Sub, BinOpKind::Mul, BinOpKind::Lt,
    BinOpKind::Le,  BinOpKind::Eq,  BinOpKind::Ne};

enum class TermKind : std::uint8_t { Var, Lit, Lam, App, BinOp, If, Seq, Err, Unreachable };

class Term;
using TermPtr = std::shared_ptr<const Term>;
using VarSet = std::set<std::string>;

// Child positions: Lam{0 body}, App{0 fn, 1 arg}, BinOp{0 lhs, 1 rhs},
// If{0 test, 1 then, 2 else}, Seq{0 first, 1 second}.
using Path = std::vector<std::uint32_t>;

class Term {
 public:
  static TermPtr var(std::string name);
  static TermPtr lit(Const c);
  static TermPtr integer(Integer v) { return lit(Const::integer(std::move(v))); }
  static TermPtr boolean(bool b) { return lit(Const::boolean(b)); }
  static TermPtr lam(std::string param, TermPtr body);
  static TermPtr app(TermPtr fn, TermPtr arg);
  static TermPtr binop(BinOpKind op, TermPtr lhs, TermPtr rhs);
  static TermPtr if_(TermPtr test, TermPtr then_branch, TermPtr else_branch);
  static TermPtr seq(TermPtr first, TermPtr second);
  static TermPtr err(std::string label);
  static TermPtr unreachable();

  // Same node with new children; returns `self` when nothing changed.
  static TermPtr rebuild(const TermPtr& self, const std::array<TermPtr, 3>& kids);

  TermKind kind() const { return kind_; }
  bool is(TermKind k) const { return kind_ == k; }

  // Var name, Lam parameter or Err label.
  const std::string& name() const { return text_; }
  const Const& value() const { return *lit_; }
  BinOpKind op() const { return op_; }

  std::size_t arity() const { return arity_; }
  const TermPtr& child(std::size_t i) const { return kids_[i]; }
  const std::array<TermPtr, 3>& children() const { return kids_; }

  std::size_t size() const { return size_; }
  // Bloom mask over every variable name mentioned anywhere below.
  std::uint64_t name_mask() const { return mask_; }

 private:
  Term() = default;
  static TermPtr make(Term t);

  TermKind kind_ = TermKind::Unreachable;
  BinOpKind op_ = BinOpKind::Add;
  std::uint8_t arity_ = 0;
  std::string text_;
  std::optional<Const> lit_;
  std::array<TermPtr, 3> kids_{};
  std::size_t size_ = 1;
  std::uint64_t mask_ = 0;
};

std::uint64_t name_bit(std::string_view name);

bool operator==(const Term& a, const Term& b);
inline bool same(const TermPtr& a, const TermPtr& b) { return a == b || *a == *b; }

bool is_value(const Term& e);
bool is_answer(const Term& e);

VarSet free_vars(const TermPtr& e);
bool is_closed(const TermPtr& e);
bool occurs_free(const TermPtr& e, const std::string& x);
bool is_well_formed(const TermPtr& e, const VarSet& delta);

// Every name used in `e`, bound or free.
VarSet all_names(const TermPtr& e);
std::string fresh_name(const std::string& base, const VarSet& avoid);

// Capture-avoiding e[x := v].
TermPtr substitute(const TermPtr& e, const std::string& x, const TermPtr& v);

bool alpha_eq(const TermPtr& a, const TermPtr& b);
std::uint64_t alpha_hash(const TermPtr& e);

// Parallel-independent renaming of bound variables to x0, x1, ... in
// binding order; alpha-equivalent terms map to identical results.
TermPtr canonical(const TermPtr& e);

class PathError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

TermPtr subterm_at(const TermPtr& e, const Path& p);
bool path_valid(const TermPtr& e, const Path& p);
TermPtr replace_at(const TermPtr& e, const Path& p, const TermPtr& sub);
// Variables bound by lambdas strictly above position p.
VarSet binders_along(const TermPtr& e, const Path& p);
std::vector<Path> all_paths(const TermPtr& e);

std::string path_to_string(const Path& p);
Path path_from_string(std::string_view s);

// x +int y guarded against leaving [min, max].
TermPtr desugar_plus_int(const TermPtr& x, const TermPtr& y, const Integer& max, const Integer& min);

}  // namespace ucalc
