#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "stefan/errors.hpp"

namespace stefan {

namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
}  // namespace detail

/// Closed arithmetic expression over the variables x and t.
///
/// Grammar: + - * / ^ (right associative), parentheses, the functions
/// sin, cos, exp, sqrt, numeric literals, and the constant pi.
/// Values are immutable and cheap to copy (subtrees are shared).
class Expr {
 public:
  Expr();  // the constant 0
  static Expr number(double v);
  static Expr var(char name);  // 'x' or 't'

  // Throws EvalError on division by zero, sqrt of a negative, or a pow
  // result outside the reals.
  double eval(double x, double t) const;

  // Symbolic derivative. The grammar is closed under differentiation as
  // long as every exponent is a constant; otherwise throws EvalError.
  Expr diff(char var) const;

  // Replace a variable by another expression.
  Expr subst(char var, const Expr& replacement) const;

  std::string str() const;

  bool is_constant(double* value = nullptr) const;
  bool depends_on(char var) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr sqrt(const Expr& a);

 private:
  explicit Expr(detail::NodePtr n) : node_(std::move(n)) {}
  detail::NodePtr node_;
};

/// Parse an expression over {x, t}. Unknown identifiers are rejected.
/// Throws ParseError with the offending offset.
Expr parse_expression(std::string_view source);

}  // namespace stefan
