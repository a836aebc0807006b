#include <cctype>
#include <charconv>
#include <limits>
#include <memory>
#include <optional>

#include "regsynth/dsl.hpp"
#include "regsynth/error.hpp"

namespace regsynth {
namespace {

enum class Tok {
  Ident, Int, LParen, RParen, LBrace, RBrace, Comma, Assign,
  Plus, Minus, Star, FloorDiv, Percent, Eq, Ge, End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

[[noreturn]] void syntax_error(const std::string& message, int line, int column) {
  throw Error(ErrorKind::Syntax, "syntax_error",
              message + " at line " + std::to_string(line) + ", column " + std::to_string(column),
              {{"line", line}, {"column", column}});
}

[[noreturn]] void grammar_error(const std::string& message, const Token& at) {
  throw Error(ErrorKind::Grammar, "grammar_violation", message,
              {{"line", at.line}, {"column", at.column}});
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t k = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t s = 0; s < n; ++s, ++k) {
      if (src[k] == '\n') {
        ++line;
        column = 1;
      } else if ((static_cast<unsigned char>(src[k]) & 0xC0) != 0x80) {
        ++column;  // count code points, not UTF-8 continuation bytes
      }
    }
  };
  while (k < src.size()) {
    const char ch = src[k];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#') {  // comment to end of line
      while (k < src.size() && src[k] != '\n') advance(1);
      continue;
    }
    const int tl = line, tc = column;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t e = k;
      while (e < src.size() && (std::isalnum(static_cast<unsigned char>(src[e])) || src[e] == '_')) ++e;
      out.push_back({Tok::Ident, std::string(src.substr(k, e - k)), tl, tc});
      advance(e - k);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t e = k;
      while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) ++e;
      std::string digits(src.substr(k, e - k));
      if (digits.size() > 1 && digits[0] == '0') syntax_error("integer literal with leading zero", tl, tc);
      out.push_back({Tok::Int, std::move(digits), tl, tc});
      advance(e - k);
      continue;
    }
    const auto starts = [&](std::string_view s) { return src.substr(k, s.size()) == s; };
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    static constexpr Sym symbols[] = {
        {"//", Tok::FloorDiv}, {"==", Tok::Eq}, {">=", Tok::Ge}, {"\xE2\x89\xA5", Tok::Ge},
        {"(", Tok::LParen},    {")", Tok::RParen}, {"{", Tok::LBrace}, {"}", Tok::RBrace},
        {",", Tok::Comma},     {"=", Tok::Assign}, {"+", Tok::Plus},   {"-", Tok::Minus},
        {"*", Tok::Star},      {"%", Tok::Percent},
    };
    bool matched = false;
    for (const Sym& s : symbols) {
      if (starts(s.text)) {
        out.push_back({s.kind, std::string(s.text), tl, tc});
        advance(s.text.size());
        matched = true;
        break;
      }
    }
    if (!matched) syntax_error("unexpected character '" + std::string(1, ch) + "'", tl, tc);
  }
  out.push_back({Tok::End, "", line, column});
  return out;
}

bool keyword_is(const Token& t, std::string_view word) {
  if (t.kind != Tok::Ident || t.text.size() != word.size()) return false;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(t.text[k])) != word[k]) return false;
  }
  return true;
}

// Arithmetic tree with Python precedence; reduced to LinearExpr afterwards.
struct Node {
  enum Kind { Num, Var, Add, Sub, Mul, FloorDiv, Mod, Neg } kind;
  long value = 0;
  char var = 0;
  std::unique_ptr<Node> lhs, rhs;
  Token at;
};
using NodePtr = std::unique_ptr<Node>;

struct Linear {
  long ci = 0, cj = 0, c = 0;
  bool constant() const { return ci == 0 && cj == 0; }
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  RegularityProgram program() {
    RegularityProgram p;
    const Token& outer_kw = peek();
    if (!keyword_is(outer_kw, "for")) {
      if (keyword_is(outer_kw, "draw") || keyword_is(outer_kw, "if")) {
        grammar_error("program must start with two nested For loops", outer_kw);
      }
      syntax_error("expected 'For'", outer_kw.line, outer_kw.column);
    }
    p.outer = loop_header('i');
    expect(Tok::LBrace, "'{'");
    const Token& inner_kw = peek();
    if (!keyword_is(inner_kw, "for")) {
      if (keyword_is(inner_kw, "draw") || keyword_is(inner_kw, "if")) {
        grammar_error("program requires two nested For loops", inner_kw);
      }
      syntax_error("expected 'For'", inner_kw.line, inner_kw.column);
    }
    p.inner = loop_header('j');
    expect(Tok::LBrace, "'{'");
    cond_draw(p);
    expect(Tok::RBrace, "'}'");
    expect(Tok::RBrace, "'}'");
    if (peek().kind != Tok::End) {
      const Token& t = peek();
      if (keyword_is(t, "for")) grammar_error("program must contain exactly one loop nest", t);
      syntax_error("unexpected trailing input", t.line, t.column);
    }
    p.validate();
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  const Token& expect(Tok kind, const char* what) {
    const Token& t = peek();
    if (t.kind != kind) syntax_error(std::string("expected ") + what, t.line, t.column);
    return next();
  }
  void expect_keyword(std::string_view word) {
    const Token& t = peek();
    if (!keyword_is(t, word)) syntax_error("expected '" + std::string(word) + "'", t.line, t.column);
    next();
  }

  int signed_int() {
    bool negative = false;
    while (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
      if (next().kind == Tok::Minus) negative = !negative;
    }
    const Token& t = expect(Tok::Int, "integer");
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || v > std::numeric_limits<int>::max()) {
      syntax_error("integer literal out of range", t.line, t.column);
    }
    return static_cast<int>(negative ? -v : v);
  }

  LoopRange loop_header(char expected_var) {
    next();  // For
    expect(Tok::LParen, "'('");
    const Token& var = expect(Tok::Ident, "loop variable");
    if (var.text != std::string(1, expected_var)) {
      grammar_error(std::string("loop variable must be '") + expected_var + "'", var);
    }
    expect_keyword("in");
    expect_keyword("range");
    expect(Tok::LParen, "'('");
    LoopRange r;
    r.lo = signed_int();
    expect(Tok::Comma, "','");
    r.hi = signed_int();
    expect(Tok::RParen, "')'");
    expect(Tok::RParen, "')'");
    return r;
  }

  void cond_draw(RegularityProgram& p) {
    const Token& t = peek();
    if (keyword_is(t, "if")) {
      next();
      expect(Tok::LParen, "'('");
      const Linear lhs = linear(*expr());
      expect(Tok::Ge, "'>='");
      const Linear rhs = linear(*expr());
      expect(Tok::RParen, "')'");
      expect(Tok::LBrace, "'{'");
      p.conditions.push_back(to_expr({lhs.ci - rhs.ci, lhs.cj - rhs.cj, lhs.c - rhs.c}, t));
      cond_draw(p);
      expect(Tok::RBrace, "'}'");
      return;
    }
    if (keyword_is(t, "for")) grammar_error("loops nested deeper than two levels", t);
    if (!keyword_is(t, "draw")) syntax_error("expected 'If' or 'Draw'", t.line, t.column);
    next();
    expect(Tok::LParen, "'('");
    named_arg("x");
    const Token& x_at = peek();
    p.x_expr = to_expr(linear(*expr()), x_at);
    expect(Tok::Comma, "','");
    named_arg("y");
    const Token& y_at = peek();
    p.y_expr = to_expr(linear(*expr()), y_at);
    if (p.y_expr.coef_i != 0) grammar_error("y expression must not depend on i", y_at);
    expect(Tok::Comma, "','");
    named_arg("attribute");
    p.attribute = attribute();
    expect(Tok::RParen, "')'");
  }

  void named_arg(std::string_view name) {
    const Token& t = peek();
    if (t.kind != Tok::Ident || t.text != name) {
      syntax_error("expected '" + std::string(name) + "='", t.line, t.column);
    }
    next();
    expect(Tok::Assign, "'='");
  }

  AttributeExpr attribute() {
    const Token& start = peek();
    if (start.kind == Tok::Int && start.text == "1" && keyword_is(peek(1), "if")) {
      next();
      next();
      expect(Tok::LParen, "'('");
      const auto first = clause();
      std::optional<std::pair<LinearExpr, int>> second;
      if (keyword_is(peek(), "and")) {
        next();
        second = clause();
      }
      expect(Tok::RParen, "')'");
      expect_keyword("else");
      const Token& zero = expect(Tok::Int, "'0'");
      if (zero.text != "0") grammar_error("conditional attribute must read '1 If (...) else 0'", zero);
      const bool modular = first.second > 0;
      if (second && modular != (second->second > 0)) {
        grammar_error("conjunction must combine two clauses of the same form", start);
      }
      if (!second) {
        if (modular) return attr::Modulo{first.first, first.second};
        return attr::IsZero{first.first};
      }
      if (modular) return attr::ModuloBoth{first.first, first.second, second->first, second->second};
      return attr::IsZeroBoth{first.first, second->first};
    }

    NodePtr root = expr();
    if (root->kind == Node::FloorDiv) {
      const Linear divisor = linear(*root->rhs);
      if (!divisor.constant()) grammar_error("divisor must be an integer", root->rhs->at);
      if (divisor.c < 2) grammar_error("divisor must be at least 2", root->rhs->at);
      return attr::Quotient{to_expr(linear(*root->lhs), root->lhs->at), static_cast<int>(divisor.c)};
    }
    const Linear value = linear(*root);
    if (!value.constant() || value.c != 0) {
      grammar_error("attribute must be 0, Expr // Integer, or a conditional form", start);
    }
    return attr::Constant{};
  }

  // Expr == 0, or (Expr) % Integer == 0. Modulus 0 marks the first form.
  std::pair<LinearExpr, int> clause() {
    const Token& at = peek();
    NodePtr lhs = expr();
    expect(Tok::Eq, "'=='");
    const Token& zero = expect(Tok::Int, "'0'");
    if (zero.text != "0") grammar_error("conditions in attributes must compare with 0", zero);
    if (lhs->kind == Node::Mod) {
      const Linear m = linear(*lhs->rhs);
      if (!m.constant() || m.c < 2) grammar_error("modulus must be an integer of at least 2", lhs->rhs->at);
      return {to_expr(linear(*lhs->lhs), at), static_cast<int>(m.c)};
    }
    return {to_expr(linear(*lhs), at), 0};
  }

  NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs, const Token& at) {
    auto n = std::make_unique<Node>(Node{kind, 0, 0, std::move(lhs), std::move(rhs), at});
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = next();
      NodePtr rhs = term();
      lhs = make(op.kind == Tok::Plus ? Node::Add : Node::Sub, std::move(lhs), std::move(rhs), op);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::FloorDiv || peek().kind == Tok::Percent) {
      const Token& op = next();
      NodePtr rhs = unary();
      const Node::Kind kind = op.kind == Tok::Star       ? Node::Mul
                              : op.kind == Tok::FloorDiv ? Node::FloorDiv
                                                         : Node::Mod;
      lhs = make(kind, std::move(lhs), std::move(rhs), op);
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
      const Token& op = next();
      NodePtr operand = unary();
      if (op.kind == Tok::Plus) return operand;
      return make(Node::Neg, std::move(operand), nullptr, op);
    }
    return primary();
  }

  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      next();
      long v = 0;
      const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || v > std::numeric_limits<int>::max()) {
        syntax_error("integer literal out of range", t.line, t.column);
      }
      auto n = make(Node::Num, nullptr, nullptr, t);
      n->value = v;
      return n;
    }
    if (t.kind == Tok::Ident) {
      if (t.text != "i" && t.text != "j") grammar_error("unknown variable '" + t.text + "'", t);
      next();
      auto n = make(Node::Var, nullptr, nullptr, t);
      n->var = t.text[0];
      return n;
    }
    if (t.kind == Tok::LParen) {
      next();
      NodePtr inner = expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    syntax_error("expected an expression", t.line, t.column);
  }

  Linear linear(const Node& n) {
    switch (n.kind) {
      case Node::Num: return {0, 0, n.value};
      case Node::Var: return n.var == 'i' ? Linear{1, 0, 0} : Linear{0, 1, 0};
      case Node::Neg: {
        const Linear a = linear(*n.lhs);
        return {-a.ci, -a.cj, -a.c};
      }
      case Node::Add:
      case Node::Sub: {
        const Linear a = linear(*n.lhs);
        const Linear b = linear(*n.rhs);
        const long s = n.kind == Node::Add ? 1 : -1;
        return {a.ci + s * b.ci, a.cj + s * b.cj, a.c + s * b.c};
      }
      case Node::Mul: {
        const Linear a = linear(*n.lhs);
        const Linear b = linear(*n.rhs);
        if (!a.constant() && !b.constant()) grammar_error("non-linear expression", n.at);
        const Linear& k = a.constant() ? a : b;
        const Linear& v = a.constant() ? b : a;
        return {k.c * v.ci, k.c * v.cj, k.c * v.c};
      }
      case Node::FloorDiv:
      case Node::Mod:
        grammar_error("'//' and '%' are only allowed at the top of an attribute expression", n.at);
    }
    grammar_error("unsupported expression", n.at);
  }

  LinearExpr to_expr(const Linear& l, const Token& at) {
    constexpr long lim = std::numeric_limits<int>::max();
    if (std::abs(l.ci) > lim || std::abs(l.cj) > lim || std::abs(l.c) > lim) {
      grammar_error("coefficient out of range", at);
    }
    return {static_cast<int>(l.ci), static_cast<int>(l.cj), static_cast<int>(l.c)};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

RegularityProgram parse_program(std::string_view text) {
  Parser parser(tokenize(text));
  return parser.program();
}

}  // namespace regsynth
