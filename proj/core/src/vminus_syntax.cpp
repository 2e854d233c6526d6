#include <cctype>

#include "ucalc/syntax.hpp"
#include "ucalc/vminus.hpp"

namespace ucalc::vminus {

std::string Operand::to_string() const { return is_var() ? name() : value().to_string(); }

std::string_view op_mnemonic(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "add";
    case BinOpKind::Sub: return "sub";
    case BinOpKind::Mul: return "mul";
    case BinOpKind::Lt: return "lt";
    case BinOpKind::Le: return "le";
    case BinOpKind::Eq: return "eq";
    case BinOpKind::Ne: return "ne";
  }
  return "?";
}

namespace {

std::optional<BinOpKind> op_from_text(std::string_view s) {
  for (BinOpKind op : kAllOps)
    if (op_mnemonic(op) == s) return op;
  return op_from_symbol(s);
}

enum class Tok { Ident, Var, Int, Punct, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    if (c == ';' || c == '#') {
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    std::size_t start = i;
    if (c == '%') {
      bump(1);
      while (i < src.size() && ident_char(src[i])) bump(1);
      t.kind = Tok::Var;
      if (i - start == 1) throw ParseError("empty variable name", t.line, t.column);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      bump(1);
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) bump(1);
      t.kind = Tok::Int;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && ident_char(src[i])) bump(1);
      t.kind = Tok::Ident;
    } else if (c == '(' || c == ')' || c == '{' || c == '}' || c == '[' || c == ']' || c == ',' || c == ':') {
      bump(1);
      t.kind = Tok::Punct;
    } else if (c == '<' || c == '!') {
      bump(1);
      if (i < src.size() && src[i] == '=') bump(1);
      t.kind = Tok::Op;
    } else if (c == '=' || c == '+' || c == '-' || c == '*') {
      bump(1);
      t.kind = Tok::Op;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = std::string(src.substr(start, i - start));
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Function function() {
    Function f;
    expect_word("fun");
    f.name = expect(Tok::Ident, "function name").text;
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        f.params.push_back(expect(Tok::Var, "parameter").text);
        if (is_punct(",")) {
          ++pos_;
          continue;
        }
        if (peek().kind == Tok::Var) continue;
        break;
      }
    }
    expect_punct(")");
    expect_punct("{");
    while (!is_punct("}")) f.blocks.push_back(block());
    expect_punct("}");
    if (peek().kind != Tok::End) fail(peek(), "trailing input after function");
    if (f.blocks.empty()) fail(peek(), "a function needs at least one block");
    return f;
  }

 private:
  Block block() {
    Block b;
    b.label = expect(Tok::Ident, "block label").text;
    expect_punct(":");
    while (peek().kind == Tok::Var && peek(1).text == "=" && peek(2).text == "phi") b.phis.push_back(phi());
    for (;;) {
      const Token& t = peek();
      if (t.kind == Tok::Var) {
        b.commands.push_back(assign());
      } else if (t.kind == Tok::Ident && t.text == "call") {
        ++pos_;
        expect_word("error");
        expect_punct("(");
        expect_punct(")");
        b.commands.push_back(CallError{});
      } else {
        break;
      }
    }
    b.term = terminator();
    return b;
  }

  Phi phi() {
    Phi p;
    p.target = expect(Tok::Var, "phi target").text;
    expect_op("=");
    expect_word("phi");
    if (!is_punct("[")) fail(peek(), "phi needs at least one incoming pair");
    while (is_punct("[")) {
      ++pos_;
      Operand v = operand();
      expect_punct(",");
      std::string label = expect(Tok::Ident, "predecessor label").text;
      expect_punct("]");
      p.incoming.emplace_back(std::move(v), std::move(label));
    }
    return p;
  }

  Command assign() {
    Assign a;
    a.target = expect(Tok::Var, "assignment target").text;
    expect_op("=");
    const Token& opt = peek();
    auto op = op_from_text(opt.text);
    if (!op || (opt.kind != Tok::Ident && opt.kind != Tok::Op)) fail(opt, "unknown operator '" + opt.text + "'");
    ++pos_;
    a.op = *op;
    a.lhs = operand();
    a.rhs = operand();
    return a;
  }

  Terminator terminator() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, "expected a terminator");
    if (t.text == "ret") {
      ++pos_;
      return Ret{operand()};
    }
    if (t.text == "unreachable") {
      ++pos_;
      return Unreachable{};
    }
    if (t.text == "br") {
      ++pos_;
      if (peek().kind == Tok::Var || peek().kind == Tok::Int) {
        Operand c = operand();
        std::string a = expect(Tok::Ident, "branch target").text;
        std::string b = expect(Tok::Ident, "branch target").text;
        return BrCond{std::move(c), std::move(a), std::move(b)};
      }
      return Br{expect(Tok::Ident, "branch target").text};
    }
    fail(t, "expected a terminator, found '" + t.text + "'");
  }

  Operand operand() {
    const Token& t = peek();
    if (t.kind == Tok::Var) {
      ++pos_;
      return Operand::var(t.text);
    }
    if (t.kind == Tok::Int) {
      ++pos_;
      return Operand::constant(Integer(t.text));
    }
    fail(t, "expected a variable or integer");
  }

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }

  const Token& expect(Tok kind, std::string_view what) {
    const Token& t = peek();
    if (t.kind != kind) fail(t, "expected " + std::string(what));
    ++pos_;
    return t;
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
    ++pos_;
  }
  void expect_op(std::string_view p) {
    if (peek().kind != Tok::Op || peek().text != p) fail(peek(), "expected '" + std::string(p) + "'");
    ++pos_;
  }
  void expect_word(std::string_view w) {
    if (peek().kind != Tok::Ident || peek().text != w) fail(peek(), "expected '" + std::string(w) + "'");
    ++pos_;
  }
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.column);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Function parse_function(std::string_view text) { return Parser(lex(text)).function(); }

std::string print_function(const Function& f) {
  std::string out = "fun " + f.name + "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    if (i) out += ", ";
    out += f.params[i];
  }
  out += ") {\n";
  for (const auto& b : f.blocks) {
    out += b.label + ":\n";
    for (const auto& p : b.phis) {
      out += "  " + p.target + " = phi";
      for (const auto& [v, l] : p.incoming) out += " [" + v.to_string() + ", " + l + "]";
      out += "\n";
    }
    for (const auto& c : b.commands) {
      if (const auto* a = std::get_if<Assign>(&c)) {
        out += "  " + a->target + " = " + std::string(op_mnemonic(a->op)) + " " + a->lhs.to_string() + " " +
               a->rhs.to_string() + "\n";
      } else {
        out += "  call error()\n";
      }
    }
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, Ret>) {
            out += "  ret " + t.value.to_string() + "\n";
          } else if constexpr (std::is_same_v<T, Br>) {
            out += "  br " + t.target + "\n";
          } else if constexpr (std::is_same_v<T, BrCond>) {
            out += "  br " + t.cond.to_string() + " " + t.if_true + " " + t.if_false + "\n";
          } else {
            out += "  unreachable\n";
          }
        },
        b.term);
  }
  out += "}\n";
  return out;
}

}  // namespace ucalc::vminus
