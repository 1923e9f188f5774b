#pragma once

// Small expression language for real functions of one variable x:
// numbers, x, + - * / ^, unary minus and exp log sqrt tanh sinh.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "ladderlab/errors.hpp"

namespace ladderlab::expr {

enum class Kind { number, variable, neg, add, sub, mul, div, pow, call };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::number;
  double value = 0.0;   // number
  std::string func;     // call
  Expr lhs;             // neg, call argument, binary left
  Expr rhs;             // binary right
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

Expr number(double v);
Expr variable();
Expr neg(Expr e);
Expr binary(Kind k, Expr a, Expr b);
// Throws ParseError (offset 0) for an unknown function name.
Expr call(const std::string& name, Expr arg);

bool is_function(std::string_view name);

// Throws ParseError with the byte offset of the problem.
Expr parse(std::string_view text);

// Minimal parentheses; parse(print(e)) reproduces e.
std::string print(const Expr& e);

// May return NaN or inf (log of 0, overflow); callers check.
double eval(const Expr& e, double x);

bool equal(const Expr& a, const Expr& b);

}  // namespace ladderlab::expr
