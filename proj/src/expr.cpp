#include "ladderlab/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace ladderlab::expr {

namespace {

constexpr std::array<std::string_view, 5> kFunctions = {"exp", "log", "sqrt", "tanh", "sinh"};

Expr make(Kind k, double v = 0.0, std::string f = {}, Expr l = nullptr, Expr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->value = v;
  n->func = std::move(f);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr run() {
    skip();
    if (pos_ == s_.size()) fail("empty expression", pos_);
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t open_paren_ = std::string_view::npos;  // innermost unclosed '('

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    // Running out of input inside parentheses is reported at the open paren.
    if (at >= s_.size() && open_paren_ != std::string_view::npos) {
      throw ParseError(what + " (unclosed '(')", open_paren_);
    }
    throw ParseError(what, at);
  }

  void skip() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) {
        e = make(Kind::add, 0.0, {}, e, product());
      } else if (accept('-')) {
        e = make(Kind::sub, 0.0, {}, e, product());
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = make(Kind::mul, 0.0, {}, e, unary());
      } else if (accept('/')) {
        e = make(Kind::div, 0.0, {}, e, unary());
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return make(Kind::neg, 0.0, {}, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return make(Kind::pow, 0.0, {}, base, exponent());
    return base;
  }

  // Right-associative and allowed to start with a minus: x^-2, x^y^z.
  Expr exponent() {
    if (accept('-')) return make(Kind::neg, 0.0, {}, exponent());
    return power();
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (is_digit(c) || c == '.') return literal();
    if (is_alpha(c)) return identifier();
    if (c == '(') {
      const std::size_t saved = open_paren_;
      open_paren_ = pos_;
      ++pos_;
      Expr e = sum();
      if (!accept(')')) fail("expected ')'", pos_);
      open_paren_ = saved;
      return e;
    }
    fail(std::string("unexpected '") + c + "'", pos_);
  }

  Expr literal() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && is_digit(s_[p])) {
        while (p < s_.size() && is_digit(s_[p])) ++p;
        pos_ = p;
      }
    }
    const std::string_view tok = s_.substr(start, pos_ - start);
    if (tok == ".") fail("malformed number", start);
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec == std::errc::result_out_of_range && std::abs(v) > 1.0) {
      fail("number out of range", start);
    }
    if (res.ptr != tok.data() + tok.size()) fail("malformed number", start);
    return make(Kind::number, v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (is_alpha(s_[pos_]) || is_digit(s_[pos_]))) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));
    if (name == "x") return make(Kind::variable);
    if (!is_function(name)) fail("unknown identifier '" + name + "'", start);
    skip();
    if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '(' after " + name, pos_);
    const std::size_t paren = pos_;
    const std::size_t saved = open_paren_;
    open_paren_ = paren;
    ++pos_;
    skip();
    if (pos_ < s_.size() && s_[pos_] == ')') fail(name + " takes exactly one argument", paren);
    Expr arg = sum();
    skip();
    if (pos_ < s_.size() && s_[pos_] == ',') fail(name + " takes exactly one argument", pos_);
    if (!accept(')')) fail("expected ')'", pos_);
    open_paren_ = saved;
    return make(Kind::call, 0.0, name, arg);
  }
};

int precedence(const Expr& e) {
  switch (e->kind) {
    case Kind::add:
    case Kind::sub:
      return 1;
    case Kind::mul:
    case Kind::div:
      return 2;
    case Kind::neg:
      return 3;
    case Kind::pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string wrap(const std::string& s, bool parens) { return parens ? "(" + s + ")" : s; }

const char* op_symbol(Kind k) {
  switch (k) {
    case Kind::add: return "+";
    case Kind::sub: return "-";
    case Kind::mul: return "*";
    case Kind::div: return "/";
    default: return "^";
  }
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t offset)
    : ConfigError("parse error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

bool is_function(std::string_view name) {
  for (auto f : kFunctions) {
    if (f == name) return true;
  }
  return false;
}

Expr number(double v) { return make(Kind::number, v); }
Expr variable() { return make(Kind::variable); }
Expr neg(Expr e) { return make(Kind::neg, 0.0, {}, std::move(e)); }
Expr binary(Kind k, Expr a, Expr b) { return make(k, 0.0, {}, std::move(a), std::move(b)); }

Expr call(const std::string& name, Expr arg) {
  if (!is_function(name)) throw ParseError("unknown identifier '" + name + "'", 0);
  return make(Kind::call, 0.0, name, std::move(arg));
}

Expr parse(std::string_view text) { return Parser(text).run(); }

std::string print(const Expr& e) {
  switch (e->kind) {
    case Kind::number:
      return format_number(e->value);
    case Kind::variable:
      return "x";
    case Kind::call:
      return e->func + "(" + print(e->lhs) + ")";
    case Kind::neg:
      return "-" + wrap(print(e->lhs), precedence(e->lhs) < 3);
    case Kind::pow:
      return wrap(print(e->lhs), precedence(e->lhs) <= 4) + "^" +
             wrap(print(e->rhs), precedence(e->rhs) < 4);
    default: {
      const int p = precedence(e);
      return wrap(print(e->lhs), precedence(e->lhs) < p) + op_symbol(e->kind) +
             wrap(print(e->rhs), precedence(e->rhs) <= p);
    }
  }
}

double eval(const Expr& e, double x) {
  switch (e->kind) {
    case Kind::number: return e->value;
    case Kind::variable: return x;
    case Kind::neg: return -eval(e->lhs, x);
    case Kind::add: return eval(e->lhs, x) + eval(e->rhs, x);
    case Kind::sub: return eval(e->lhs, x) - eval(e->rhs, x);
    case Kind::mul: return eval(e->lhs, x) * eval(e->rhs, x);
    case Kind::div: return eval(e->lhs, x) / eval(e->rhs, x);
    case Kind::pow: return std::pow(eval(e->lhs, x), eval(e->rhs, x));
    case Kind::call: {
      const double a = eval(e->lhs, x);
      if (e->func == "exp") return std::exp(a);
      if (e->func == "log") return a > 0.0 ? std::log(a) : (a == 0.0 ? -HUGE_VAL : NAN);
      if (e->func == "sqrt") return std::sqrt(a);
      if (e->func == "tanh") return std::tanh(a);
      return std::sinh(a);
    }
  }
  return NAN;
}

bool equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::number: return a->value == b->value;
    case Kind::variable: return true;
    case Kind::call: return a->func == b->func && equal(a->lhs, b->lhs);
    case Kind::neg: return equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

}  // namespace ladderlab::expr
