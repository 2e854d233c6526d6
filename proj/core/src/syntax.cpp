#include "ucalc/syntax.hpp"

#include <cctype>

namespace ucalc {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  Sexp read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    Sexp s;
    s.line = line_;
    s.column = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '(') {
      advance();
      s.kind = Sexp::Kind::List;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unclosed '('", s.line, s.column);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        s.items.push_back(read());
      }
      return s;
    }
    while (pos_ < text_.size() && !delimiter(text_[pos_])) {
      s.atom += text_[pos_];
      advance();
    }
    return s;
  }

 private:
  static bool delimiter(char c) {
    return c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c));
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

[[noreturn]] void fail(const Sexp& at, const std::string& msg) { throw ParseError(msg, at.line, at.column); }

std::string symbol_of(const Sexp& s) {
  if (s.kind != Sexp::Kind::Atom) fail(s, "expected a symbol");
  if (is_keyword(s.atom) || is_int_token(s.atom) || op_from_symbol(s.atom))
    fail(s, "'" + s.atom + "' cannot be used as a variable");
  return s.atom;
}

}  // namespace

std::vector<Sexp> read_sexps(std::string_view text) {
  Reader r(text);
  std::vector<Sexp> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

Sexp read_one_sexp(std::string_view text) {
  Reader r(text);
  if (r.at_end()) throw ParseError("empty input", 1, 1);
  Sexp s = r.read();
  if (!r.at_end()) {
    Sexp extra = r.read();
    fail(extra, "trailing input after term");
  }
  return s;
}

bool is_keyword(std::string_view s) {
  return s == "lambda" || s == "if" || s == "seq" || s == "err" || s == "unreachable" ||
         s == "true" || s == "false";
}

bool is_int_token(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && s[0] == '-') i = 1;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

TermPtr term_from_sexp(const Sexp& s) {
  if (s.kind == Sexp::Kind::Atom) {
    if (is_int_token(s.atom)) return Term::integer(Integer(s.atom));
    if (s.atom == "true") return Term::boolean(true);
    if (s.atom == "false") return Term::boolean(false);
    return Term::var(symbol_of(s));
  }
  if (s.items.empty()) fail(s, "empty list");
  const Sexp& head = s.items.front();
  const std::size_t n = s.items.size();
  if (head.kind == Sexp::Kind::Atom) {
    const std::string& h = head.atom;
    if (h == "lambda") {
      if (n != 3 || s.items[1].kind != Sexp::Kind::List || s.items[1].items.empty())
        fail(s, "expected (lambda (x+) e)");
      TermPtr body = term_from_sexp(s.items[2]);
      const auto& params = s.items[1].items;
      for (auto it = params.rbegin(); it != params.rend(); ++it) body = Term::lam(symbol_of(*it), body);
      return body;
    }
    if (h == "if") {
      if (n != 4) fail(s, "expected (if e e e)");
      return Term::if_(term_from_sexp(s.items[1]), term_from_sexp(s.items[2]), term_from_sexp(s.items[3]));
    }
    if (h == "seq") {
      if (n < 3) fail(s, "expected (seq e e+)");
      TermPtr acc = term_from_sexp(s.items[n - 1]);
      for (std::size_t i = n - 1; i-- > 1;) acc = Term::seq(term_from_sexp(s.items[i]), acc);
      return acc;
    }
    if (h == "err") {
      if (n != 2 || s.items[1].kind != Sexp::Kind::Atom) fail(s, "expected (err label)");
      return Term::err(symbol_of(s.items[1]));
    }
    if (h == "unreachable") {
      if (n != 1) fail(s, "unreachable takes no operands");
      return Term::unreachable();
    }
    if (auto op = op_from_symbol(h)) {
      if (n != 3) fail(s, "operator '" + h + "' takes exactly two operands");
      return Term::binop(*op, term_from_sexp(s.items[1]), term_from_sexp(s.items[2]));
    }
  }
  if (n < 2) fail(s, "application needs an argument");
  TermPtr acc = term_from_sexp(s.items[0]);
  for (std::size_t i = 1; i < n; ++i) acc = Term::app(acc, term_from_sexp(s.items[i]));
  return acc;
}

TermPtr parse_term(std::string_view text) { return term_from_sexp(read_one_sexp(text)); }

namespace {

void print_rec(const TermPtr& e, std::string& out) {
  switch (e->kind()) {
    case TermKind::Var:
      out += e->name();
      return;
    case TermKind::Lit:
      out += e->value().to_string();
      return;
    case TermKind::Err:
      out += "(err " + e->name() + ")";
      return;
    case TermKind::Unreachable:
      out += "(unreachable)";
      return;
    case TermKind::Lam: {
      out += "(lambda (";
      const Term* cur = e.get();
      bool first = true;
      while (cur->is(TermKind::Lam)) {
        if (!first) out += ' ';
        out += cur->name();
        first = false;
        if (!cur->child(0)->is(TermKind::Lam)) break;
        cur = cur->child(0).get();
      }
      out += ") ";
      print_rec(cur->child(0), out);
      out += ')';
      return;
    }
    case TermKind::App: {
      std::vector<const TermPtr*> args;
      const TermPtr* fn = &e;
      while ((*fn)->is(TermKind::App)) {
        args.push_back(&(*fn)->child(1));
        fn = &(*fn)->child(0);
      }
      out += '(';
      print_rec(*fn, out);
      for (auto it = args.rbegin(); it != args.rend(); ++it) {
        out += ' ';
        print_rec(**it, out);
      }
      out += ')';
      return;
    }
    case TermKind::BinOp:
      out += '(';
      out += op_symbol(e->op());
      out += ' ';
      print_rec(e->child(0), out);
      out += ' ';
      print_rec(e->child(1), out);
      out += ')';
      return;
    case TermKind::If:
      out += "(if ";
      print_rec(e->child(0), out);
      out += ' ';
      print_rec(e->child(1), out);
      out += ' ';
      print_rec(e->child(2), out);
      out += ')';
      return;
    case TermKind::Seq: {
      out += "(seq";
      const TermPtr* cur = &e;
      while ((*cur)->is(TermKind::Seq)) {
        out += ' ';
        print_rec((*cur)->child(0), out);
        cur = &(*cur)->child(1);
      }
      out += ' ';
      print_rec(*cur, out);
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string print_term(const TermPtr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

}  // namespace ucalc
