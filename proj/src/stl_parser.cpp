#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>

#include "falsify/stl.hpp"

namespace falsify::stl {

namespace {

enum class Tok {
  End, Ident, Number, LParen, RParen, LBracket, RBracket, Comma,
  Plus, Minus, Star, Not, AndAnd, OrOr, Lt, Le, Gt, Ge,
  Always, Eventually, Until, Inf,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, current_.line, current_.column);
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) step();
    current_ = Token{.kind = Tok::End, .line = line_, .column = column_};
    if (pos_ >= src_.size()) return;

    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ident += src_[pos_];
        step();
      }
      if (ident == "G") current_.kind = Tok::Always;
      else if (ident == "F") current_.kind = Tok::Eventually;
      else if (ident == "U") current_.kind = Tok::Until;
      else if (ident == "inf") current_.kind = Tok::Inf;
      else current_.kind = Tok::Ident;
      current_.text = std::move(ident);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) {
        ++end;
      }
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t exp = end + 1;
        if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
        if (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) {
          ++exp;
          while (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) ++exp;
          end = exp;
        }
      }
      double value = 0.0;
      auto res = std::from_chars(src_.data() + pos_, src_.data() + end, value);
      if (res.ec != std::errc() || res.ptr != src_.data() + end) {
        throw ParseError("malformed number '" + std::string(src_.substr(pos_, end - pos_)) + "'",
                         line_, column_);
      }
      current_.kind = Tok::Number;
      current_.value = value;
      while (pos_ < end) step();
      return;
    }

    auto two = [&](char second) { return pos_ + 1 < src_.size() && src_[pos_ + 1] == second; };
    switch (c) {
      case '(': current_.kind = Tok::LParen; step(); return;
      case ')': current_.kind = Tok::RParen; step(); return;
      case '[': current_.kind = Tok::LBracket; step(); return;
      case ']': current_.kind = Tok::RBracket; step(); return;
      case ',': current_.kind = Tok::Comma; step(); return;
      case '+': current_.kind = Tok::Plus; step(); return;
      case '-': current_.kind = Tok::Minus; step(); return;
      case '*': current_.kind = Tok::Star; step(); return;
      case '!': current_.kind = Tok::Not; step(); return;
      case '&':
        if (!two('&')) throw ParseError("expected '&&'", line_, column_);
        step(); step();
        current_.kind = Tok::AndAnd;
        return;
      case '|':
        if (!two('|')) throw ParseError("expected '||'", line_, column_);
        step(); step();
        current_.kind = Tok::OrOr;
        return;
      case '<':
        step();
        if (pos_ < src_.size() && src_[pos_] == '=') { step(); current_.kind = Tok::Le; }
        else current_.kind = Tok::Lt;
        return;
      case '>':
        step();
        if (pos_ < src_.size() && src_[pos_] == '=') { step(); current_.kind = Tok::Ge; }
        else current_.kind = Tok::Gt;
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
    }
  }

  void step() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

// Linear combination of variables plus a constant, built up while parsing
// one side of a comparison.
struct LinExpr {
  std::map<std::string, double> coeffs;
  double constant = 0.0;

  void add(const LinExpr& other, double sign) {
    for (const auto& [name, c] : other.coeffs) coeffs[name] += sign * c;
    constant += sign * other.constant;
  }
};

class Parser {
 public:
  Lexer* lex;

  Formula parse_or() {
    Formula f = parse_and();
    while (lex->peek().kind == Tok::OrOr) {
      lex->take();
      f = Formula::disjunction(std::move(f), parse_and());
    }
    return f;
  }

 private:
  Formula parse_and() {
    Formula f = parse_until();
    while (lex->peek().kind == Tok::AndAnd) {
      lex->take();
      f = Formula::conjunction(std::move(f), parse_until());
    }
    return f;
  }

  Formula parse_until() {
    Formula f = parse_unary();
    while (lex->peek().kind == Tok::Until) {
      lex->take();
      if (lex->peek().kind != Tok::LBracket) lex->fail("'U' requires an interval, e.g. U[0,5]");
      Interval w = parse_interval();
      f = Formula::until(w, std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    switch (lex->peek().kind) {
      case Tok::Not:
        lex->take();
        return Formula::negation(parse_unary());
      case Tok::Always:
      case Tok::Eventually: {
        const bool always = lex->take().kind == Tok::Always;
        Interval w;  // bare G/F: [0, inf)
        if (lex->peek().kind == Tok::LBracket) w = parse_interval();
        Formula child = parse_unary();
        return always ? Formula::always(w, std::move(child))
                      : Formula::eventually(w, std::move(child));
      }
      default:
        return parse_primary();
    }
  }

  Formula parse_primary() {
    if (lex->peek().kind == Tok::LParen) {
      lex->take();
      Formula f = parse_or();
      expect(Tok::RParen, "expected ')'");
      return f;
    }
    return parse_comparison();
  }

  Formula parse_comparison() {
    LinExpr lhs = parse_linexpr();
    const Token op = lex->peek();
    if (op.kind != Tok::Lt && op.kind != Tok::Le && op.kind != Tok::Gt && op.kind != Tok::Ge) {
      lex->fail("expected a comparison operator (<, <=, >, >=)");
    }
    lex->take();
    LinExpr rhs = parse_linexpr();

    // Rewrite to the canonical margin form: e1 < e2 becomes e2 - e1 > 0, etc.
    LinExpr g;
    const bool less = op.kind == Tok::Lt || op.kind == Tok::Le;
    g.add(less ? rhs : lhs, 1.0);
    g.add(less ? lhs : rhs, -1.0);

    Atom a;
    a.constant = g.constant;
    a.strict = op.kind == Tok::Lt || op.kind == Tok::Gt;
    for (auto& [name, c] : g.coeffs) a.coeffs.emplace_back(name, c);
    try {
      return Formula::atom(std::move(a));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), op.line, op.column);
    }
  }

  LinExpr parse_linexpr() {
    LinExpr e;
    double sign = 1.0;
    if (lex->peek().kind == Tok::Plus || lex->peek().kind == Tok::Minus) {
      sign = lex->take().kind == Tok::Minus ? -1.0 : 1.0;
    }
    e.add(parse_term(), sign);
    while (lex->peek().kind == Tok::Plus || lex->peek().kind == Tok::Minus) {
      sign = lex->take().kind == Tok::Minus ? -1.0 : 1.0;
      e.add(parse_term(), sign);
    }
    return e;
  }

  LinExpr parse_term() {
    LinExpr e;
    const Token t = lex->peek();
    if (t.kind == Tok::Number) {
      lex->take();
      if (lex->peek().kind == Tok::Star) {
        lex->take();
        if (lex->peek().kind != Tok::Ident) lex->fail("expected a variable name after '*'");
        e.coeffs[lex->take().text] += t.value;
      } else {
        e.constant += t.value;
      }
      return e;
    }
    if (t.kind == Tok::Ident) {
      lex->take();
      e.coeffs[t.text] += 1.0;
      return e;
    }
    lex->fail("expected a number or variable");
  }

  Interval parse_interval() {
    const Token open = lex->take();  // '['
    Interval w;
    w.lo = parse_bound();
    expect(Tok::Comma, "expected ',' in interval");
    w.hi = parse_bound();
    expect(Tok::RBracket, "unterminated interval, expected ']'");
    if (w.lo < 0.0 || (w.bounded() && w.lo > w.hi) || w.lo == kHorizon) {
      throw ParseError("malformed interval: bounds must satisfy 0 <= lo <= hi", open.line,
                       open.column);
    }
    return w;
  }

  double parse_bound() {
    if (lex->peek().kind == Tok::Inf) {
      lex->take();
      return kHorizon;
    }
    if (lex->peek().kind != Tok::Number) lex->fail("expected a number or 'inf' in interval");
    return lex->take().value;
  }

  void expect(Tok kind, const char* msg) {
    if (lex->peek().kind != kind) lex->fail(msg);
    lex->take();
  }
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Lexer lex(text);
  Parser parser{.lex = &lex};
  Formula f = parser.parse_or();
  if (lex.peek().kind != Tok::End) lex.fail("unexpected trailing input");
  return f;
}

}  // namespace falsify::stl
