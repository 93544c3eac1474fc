#include "stefan/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace stefan {
namespace detail {

enum class Kind { num, var, add, sub, mul, div, pow, neg, sin, cos, exp, sqrt };

struct ExprNode {
  Kind kind;
  double value = 0.0;  // num
  char name = 0;       // var
  NodePtr a, b;
};

namespace {

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr num(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::num;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double* v = nullptr) {
  if (n->kind != Kind::num) return false;
  if (v) *v = n->value;
  return true;
}

double eval_node(const ExprNode* n, double x, double t) {
  switch (n->kind) {
    case Kind::num:
      return n->value;
    case Kind::var:
      return n->name == 'x' ? x : t;
    case Kind::add:
      return eval_node(n->a.get(), x, t) + eval_node(n->b.get(), x, t);
    case Kind::sub:
      return eval_node(n->a.get(), x, t) - eval_node(n->b.get(), x, t);
    case Kind::mul:
      return eval_node(n->a.get(), x, t) * eval_node(n->b.get(), x, t);
    case Kind::div: {
      const double den = eval_node(n->b.get(), x, t);
      if (den == 0.0) throw EvalError("division by zero");
      return eval_node(n->a.get(), x, t) / den;
    }
    case Kind::pow: {
      const double base = eval_node(n->a.get(), x, t);
      const double e = eval_node(n->b.get(), x, t);
      const double r = std::pow(base, e);
      if (!std::isfinite(r)) throw EvalError("pow outside the reals");
      return r;
    }
    case Kind::neg:
      return -eval_node(n->a.get(), x, t);
    case Kind::sin:
      return std::sin(eval_node(n->a.get(), x, t));
    case Kind::cos:
      return std::cos(eval_node(n->a.get(), x, t));
    case Kind::exp:
      return std::exp(eval_node(n->a.get(), x, t));
    case Kind::sqrt: {
      const double v = eval_node(n->a.get(), x, t);
      if (v < 0.0) throw EvalError("sqrt of a negative value");
      return std::sqrt(v);
    }
  }
  throw EvalError("corrupt expression node");
}

// Smart constructors with light constant folding.
NodePtr n_add(NodePtr a, NodePtr b);
NodePtr n_sub(NodePtr a, NodePtr b);
NodePtr n_mul(NodePtr a, NodePtr b);
NodePtr n_div(NodePtr a, NodePtr b);
NodePtr n_pow(NodePtr a, NodePtr b);
NodePtr n_neg(NodePtr a);

NodePtr n_add(NodePtr a, NodePtr b) {
  double va, vb;
  if (is_const(a, &va) && is_const(b, &vb)) return num(va + vb);
  if (is_const(a, &va) && va == 0.0) return b;
  if (is_const(b, &vb) && vb == 0.0) return a;
  return make(Kind::add, std::move(a), std::move(b));
}

NodePtr n_sub(NodePtr a, NodePtr b) {
  double va, vb;
  if (is_const(a, &va) && is_const(b, &vb)) return num(va - vb);
  if (is_const(b, &vb) && vb == 0.0) return a;
  if (is_const(a, &va) && va == 0.0) return n_neg(std::move(b));
  return make(Kind::sub, std::move(a), std::move(b));
}

NodePtr n_mul(NodePtr a, NodePtr b) {
  double va, vb;
  if (is_const(a, &va) && is_const(b, &vb)) return num(va * vb);
  if (is_const(a, &va)) {
    if (va == 0.0) return num(0.0);
    if (va == 1.0) return b;
  }
  if (is_const(b, &vb)) {
    if (vb == 0.0) return num(0.0);
    if (vb == 1.0) return a;
  }
  return make(Kind::mul, std::move(a), std::move(b));
}

NodePtr n_div(NodePtr a, NodePtr b) {
  double va, vb;
  if (is_const(b, &vb) && vb != 0.0) {
    if (is_const(a, &va)) return num(va / vb);
    if (vb == 1.0) return a;
  }
  if (is_const(a, &va) && va == 0.0 && !is_const(b, &vb)) return num(0.0);
  return make(Kind::div, std::move(a), std::move(b));
}

NodePtr n_pow(NodePtr a, NodePtr b) {
  double va, vb;
  if (is_const(b, &vb)) {
    if (vb == 0.0) return num(1.0);
    if (vb == 1.0) return a;
    if (is_const(a, &va)) {
      const double r = std::pow(va, vb);
      if (std::isfinite(r)) return num(r);
    }
  }
  return make(Kind::pow, std::move(a), std::move(b));
}

NodePtr n_neg(NodePtr a) {
  double va;
  if (is_const(a, &va)) return num(-va);
  if (a->kind == Kind::neg) return a->a;
  return make(Kind::neg, std::move(a));
}

NodePtr n_fun(Kind k, NodePtr a) {
  double va;
  if (is_const(a, &va)) {
    switch (k) {
      case Kind::sin:
        return num(std::sin(va));
      case Kind::cos:
        return num(std::cos(va));
      case Kind::exp:
        return num(std::exp(va));
      case Kind::sqrt:
        if (va >= 0.0) return num(std::sqrt(va));
        break;  // keep the node so eval reports the domain error
      default:
        break;
    }
  }
  return make(k, std::move(a));
}

NodePtr diff_node(const NodePtr& n, char var) {
  switch (n->kind) {
    case Kind::num:
      return num(0.0);
    case Kind::var:
      return num(n->name == var ? 1.0 : 0.0);
    case Kind::add:
      return n_add(diff_node(n->a, var), diff_node(n->b, var));
    case Kind::sub:
      return n_sub(diff_node(n->a, var), diff_node(n->b, var));
    case Kind::mul:
      return n_add(n_mul(diff_node(n->a, var), n->b),
                   n_mul(n->a, diff_node(n->b, var)));
    case Kind::div:
      return n_div(n_sub(n_mul(diff_node(n->a, var), n->b),
                         n_mul(n->a, diff_node(n->b, var))),
                   n_mul(n->b, n->b));
    case Kind::pow: {
      double c;
      if (!is_const(n->b, &c))
        throw EvalError("cannot differentiate a non-constant exponent");
      return n_mul(n_mul(num(c), n_pow(n->a, num(c - 1.0))),
                   diff_node(n->a, var));
    }
    case Kind::neg:
      return n_neg(diff_node(n->a, var));
    case Kind::sin:
      return n_mul(n_fun(Kind::cos, n->a), diff_node(n->a, var));
    case Kind::cos:
      return n_neg(n_mul(n_fun(Kind::sin, n->a), diff_node(n->a, var)));
    case Kind::exp:
      return n_mul(n_fun(Kind::exp, n->a), diff_node(n->a, var));
    case Kind::sqrt:
      return n_div(diff_node(n->a, var),
                   n_mul(num(2.0), n_fun(Kind::sqrt, n->a)));
  }
  throw EvalError("corrupt expression node");
}

NodePtr subst_node(const NodePtr& n, char var, const NodePtr& rep) {
  switch (n->kind) {
    case Kind::num:
      return n;
    case Kind::var:
      return n->name == var ? rep : n;
    case Kind::add:
      return n_add(subst_node(n->a, var, rep), subst_node(n->b, var, rep));
    case Kind::sub:
      return n_sub(subst_node(n->a, var, rep), subst_node(n->b, var, rep));
    case Kind::mul:
      return n_mul(subst_node(n->a, var, rep), subst_node(n->b, var, rep));
    case Kind::div:
      return n_div(subst_node(n->a, var, rep), subst_node(n->b, var, rep));
    case Kind::pow:
      return n_pow(subst_node(n->a, var, rep), subst_node(n->b, var, rep));
    case Kind::neg:
      return n_neg(subst_node(n->a, var, rep));
    case Kind::sin:
    case Kind::cos:
    case Kind::exp:
    case Kind::sqrt:
      return n_fun(n->kind, subst_node(n->a, var, rep));
  }
  throw EvalError("corrupt expression node");
}

bool depends_node(const NodePtr& n, char var) {
  switch (n->kind) {
    case Kind::num:
      return false;
    case Kind::var:
      return n->name == var;
    case Kind::neg:
    case Kind::sin:
    case Kind::cos:
    case Kind::exp:
    case Kind::sqrt:
      return depends_node(n->a, var);
    default:
      return depends_node(n->a, var) || depends_node(n->b, var);
  }
}

int precedence(Kind k) {
  switch (k) {
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

void print_node(const NodePtr& n, std::string& out, int parent_prec) {
  const int prec = precedence(n->kind);
  const bool wrap = prec < parent_prec;
  if (wrap) out += '(';
  switch (n->kind) {
    case Kind::num: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n->value);
      if (n->value < 0.0 || std::signbit(n->value)) {
        out += '(';
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      break;
    }
    case Kind::var:
      out += n->name;
      break;
    case Kind::add:
      print_node(n->a, out, prec);
      out += " + ";
      print_node(n->b, out, prec);
      break;
    case Kind::sub:
      print_node(n->a, out, prec);
      out += " - ";
      print_node(n->b, out, prec + 1);
      break;
    case Kind::mul:
      print_node(n->a, out, prec);
      out += "*";
      print_node(n->b, out, prec);
      break;
    case Kind::div:
      print_node(n->a, out, prec);
      out += "/";
      print_node(n->b, out, prec + 1);
      break;
    case Kind::pow:
      print_node(n->a, out, prec + 1);  // ^ is right associative
      out += "^";
      print_node(n->b, out, prec);
      break;
    case Kind::neg:
      out += "-";
      print_node(n->a, out, prec + 1);
      break;
    case Kind::sin:
    case Kind::cos:
    case Kind::exp:
    case Kind::sqrt:
      out += n->kind == Kind::sin    ? "sin"
             : n->kind == Kind::cos  ? "cos"
             : n->kind == Kind::exp  ? "exp"
                                     : "sqrt";
      out += '(';
      print_node(n->a, out, 0);
      out += ')';
      break;
  }
  if (wrap) out += ')';
}

struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos;
        lhs = n_add(std::move(lhs), parse_term());
      } else if (c == '-') {
        ++pos;
        lhs = n_sub(std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos;
        lhs = n_mul(std::move(lhs), parse_factor());
      } else if (c == '/') {
        ++pos;
        lhs = n_div(std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (peek() == '-') {
      ++pos;
      return n_neg(parse_factor());
    }
    if (peek() == '+') {
      ++pos;
      return parse_factor();
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (peek() == '^') {
      ++pos;
      return n_pow(std::move(base), parse_factor());
    }
    return base;
  }

  NodePtr parse_atom() {
    const char c = peek();
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (peek() != ')') fail("expected ')'");
      ++pos;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (c == '\0') fail("unexpected end of expression");
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* first = src.data() + pos;
    const char* last = src.data() + src.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("malformed number");
    pos += static_cast<std::size_t>(ptr - first);
    return num(v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    const std::string name(src.substr(start, pos - start));
    if (name == "x" || name == "t") {
      auto n = std::make_shared<ExprNode>();
      n->kind = Kind::var;
      n->name = name[0];
      return n;
    }
    if (name == "pi") return num(3.14159265358979323846);
    if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt") {
      if (peek() != '(') {
        pos = start;
        fail("function '" + name + "' requires parentheses");
      }
      ++pos;
      NodePtr arg = parse_expr();
      if (peek() != ')') fail("expected ')'");
      ++pos;
      const Kind k = name == "sin"   ? Kind::sin
                     : name == "cos" ? Kind::cos
                     : name == "exp" ? Kind::exp
                                     : Kind::sqrt;
      return n_fun(k, std::move(arg));
    }
    pos = start;
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace
}  // namespace detail

using detail::ExprNode;
using detail::Kind;

Expr::Expr() : node_(detail::num(0.0)) {}

Expr Expr::number(double v) { return Expr(detail::num(v)); }

Expr Expr::var(char name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::var;
  n->name = name;
  return Expr(std::move(n));
}

double Expr::eval(double x, double t) const { return detail::eval_node(node_.get(), x, t); }

Expr Expr::diff(char var) const { return Expr(detail::diff_node(node_, var)); }

Expr Expr::subst(char var, const Expr& replacement) const {
  return Expr(detail::subst_node(node_, var, replacement.node_));
}

std::string Expr::str() const {
  std::string out;
  detail::print_node(node_, out, 0);
  return out;
}

bool Expr::is_constant(double* value) const { return detail::is_const(node_, value); }

bool Expr::depends_on(char var) const { return detail::depends_node(node_, var); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(detail::n_add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(detail::n_sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(detail::n_mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(detail::n_div(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(detail::n_neg(a.node_)); }
Expr pow(const Expr& base, const Expr& exponent) {
  return Expr(detail::n_pow(base.node_, exponent.node_));
}
Expr sin(const Expr& a) { return Expr(detail::n_fun(Kind::sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(detail::n_fun(Kind::cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(detail::n_fun(Kind::exp, a.node_)); }
Expr sqrt(const Expr& a) { return Expr(detail::n_fun(Kind::sqrt, a.node_)); }

Expr parse_expression(std::string_view source) {
  detail::Parser p{source};
  if (p.eof()) throw ParseError("empty expression", 0);
  detail::NodePtr root = p.parse_expr();
  if (!p.eof()) p.fail("unexpected trailing input");
  return Expr(std::move(root));
}

}  // namespace stefan
