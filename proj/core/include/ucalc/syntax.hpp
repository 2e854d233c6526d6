#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ucalc/term.hpp"

namespace ucalc {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// S-expression reader shared by the term, trace and context syntaxes.
struct Sexp {
  enum class Kind { Atom, List } kind = Kind::Atom;
  std::string atom;
  std::vector<Sexp> items;
  int line = 1;
  int column = 1;
};

std::vector<Sexp> read_sexps(std::string_view text);
Sexp read_one_sexp(std::string_view text);

bool is_keyword(std::string_view s);
bool is_int_token(std::string_view s);

TermPtr parse_term(std::string_view text);
TermPtr term_from_sexp(const Sexp& s);
std::string print_term(const TermPtr& e);

}  // namespace ucalc
