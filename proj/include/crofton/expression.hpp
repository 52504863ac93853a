#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crofton/error.hpp"
#include "crofton/surfaces.hpp"
#include "crofton/vec.hpp"

namespace crofton {

// Arithmetic expression over named variables.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | variable | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp
//
// So -x^2 is -(x^2) and 2^3^2 is 2^9.
class Expression {
 public:
  static Expression parse(std::string_view text, std::vector<std::string> variables = {"x", "y", "z"}) {
    Expression e;
    e.variables_ = std::move(variables);
    Parser p{text, 0, e};
    p.skip_space();
    e.root_ = p.expr();
    p.skip_space();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    return e;
  }

  std::size_t arity() const { return variables_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }

  double operator()(std::span<const double> vars) const {
    check_arity(vars.size());
    return value(root_, vars);
  }

  double operator()(const Vec3& x) const {
    const double v[3] = {x.x, x.y, x.z};
    return (*this)(std::span<const double>(v, 3));
  }

  // Value plus exact partial derivatives (forward-mode differentiation).
  double gradient(std::span<const double> vars, std::span<double> grad) const {
    check_arity(vars.size());
    if (grad.size() != vars.size()) throw InvalidArgument("Expression: gradient buffer has the wrong size");
    Dual d = dual(root_, vars);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = d.d[i];
    return d.v;
  }

  Vec3 gradient(const Vec3& x) const {
    const double v[3] = {x.x, x.y, x.z};
    double g[3];
    gradient(std::span<const double>(v, 3), std::span<double>(g, 3));
    return {g[0], g[1], g[2]};
  }

 private:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

  struct Node {
    Op op = Op::Const;
    double c = 0.0;
    std::size_t var = 0;
    int a = -1;
    int b = -1;
  };

  struct Dual {
    double v = 0.0;
    std::vector<double> d;
  };

  struct Parser {
    std::string_view s;
    std::size_t pos;
    Expression& e;

    [[noreturn]] void fail(const std::string& what) const {
      throw ParseError("expression: " + what + " at column " + std::to_string(pos + 1));
    }

    void skip_space() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
      skip_space();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    int add(Node n) {
      e.nodes_.push_back(n);
      return static_cast<int>(e.nodes_.size() - 1);
    }

    int expr() {
      int lhs = term();
      for (;;) {
        if (eat('+')) {
          lhs = add({Op::Add, 0.0, 0, lhs, term()});
        } else if (eat('-')) {
          lhs = add({Op::Sub, 0.0, 0, lhs, term()});
        } else {
          return lhs;
        }
      }
    }

    int term() {
      int lhs = unary();
      for (;;) {
        if (eat('*')) {
          lhs = add({Op::Mul, 0.0, 0, lhs, unary()});
        } else if (eat('/')) {
          lhs = add({Op::Div, 0.0, 0, lhs, unary()});
        } else {
          return lhs;
        }
      }
    }

    int unary() {
      if (eat('-')) return add({Op::Neg, 0.0, 0, unary(), -1});
      return power();
    }

    int power() {
      const int base = primary();
      if (eat('^')) return add({Op::Pow, 0.0, 0, base, unary()});
      return base;
    }

    int primary() {
      skip_space();
      if (pos >= s.size()) fail("unexpected end of input");
      const char c = s[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
      if (eat('(')) {
        const int inner = expr();
        if (!eat(')')) fail("expected ')'");
        return inner;
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }

    int number() {
      const std::string rest(s.substr(pos));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos += static_cast<std::size_t>(end - rest.c_str());
      return add({Op::Const, v, 0, -1, -1});
    }

    int name() {
      const std::size_t start = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
      const std::string id(s.substr(start, pos - start));
      for (std::size_t i = 0; i < e.variables_.size(); ++i) {
        if (e.variables_[i] == id) return add({Op::Var, 0.0, i, -1, -1});
      }
      Op op;
      if (id == "sin") {
        op = Op::Sin;
      } else if (id == "cos") {
        op = Op::Cos;
      } else if (id == "exp") {
        op = Op::Exp;
      } else {
        pos = start;
        fail("unknown name '" + id + "'");
      }
      if (!eat('(')) fail("expected '(' after " + id);
      const int arg = expr();
      if (!eat(')')) fail("expected ')'");
      return add({op, 0.0, 0, arg, -1});
    }
  };

  void check_arity(std::size_t n) const {
    if (n != variables_.size()) throw InvalidArgument("Expression: wrong number of variables");
  }

  double value(int i, std::span<const double> x) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.op) {
      case Op::Const: return n.c;
      case Op::Var: return x[n.var];
      case Op::Neg: return -value(n.a, x);
      case Op::Add: return value(n.a, x) + value(n.b, x);
      case Op::Sub: return value(n.a, x) - value(n.b, x);
      case Op::Mul: return value(n.a, x) * value(n.b, x);
      case Op::Div: return value(n.a, x) / value(n.b, x);
      case Op::Pow: return std::pow(value(n.a, x), value(n.b, x));
      case Op::Sin: return std::sin(value(n.a, x));
      case Op::Cos: return std::cos(value(n.a, x));
      case Op::Exp: return std::exp(value(n.a, x));
    }
    return 0.0;
  }

  Dual dual(int i, std::span<const double> x) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    const std::size_t k = x.size();
    Dual out{0.0, std::vector<double>(k, 0.0)};
    switch (n.op) {
      case Op::Const:
        out.v = n.c;
        return out;
      case Op::Var:
        out.v = x[n.var];
        out.d[n.var] = 1.0;
        return out;
      case Op::Neg: {
        Dual a = dual(n.a, x);
        a.v = -a.v;
        for (double& d : a.d) d = -d;
        return a;
      }
      case Op::Sin:
      case Op::Cos:
      case Op::Exp: {
        Dual a = dual(n.a, x);
        double f = 0.0;
        double df = 0.0;
        if (n.op == Op::Sin) {
          f = std::sin(a.v);
          df = std::cos(a.v);
        } else if (n.op == Op::Cos) {
          f = std::cos(a.v);
          df = -std::sin(a.v);
        } else {
          f = std::exp(a.v);
          df = f;
        }
        a.v = f;
        for (double& d : a.d) d *= df;
        return a;
      }
      default:
        break;
    }
    const Dual a = dual(n.a, x);
    const Dual b = dual(n.b, x);
    switch (n.op) {
      case Op::Add:
        out.v = a.v + b.v;
        for (std::size_t j = 0; j < k; ++j) out.d[j] = a.d[j] + b.d[j];
        break;
      case Op::Sub:
        out.v = a.v - b.v;
        for (std::size_t j = 0; j < k; ++j) out.d[j] = a.d[j] - b.d[j];
        break;
      case Op::Mul:
        out.v = a.v * b.v;
        for (std::size_t j = 0; j < k; ++j) out.d[j] = a.d[j] * b.v + a.v * b.d[j];
        break;
      case Op::Div:
        out.v = a.v / b.v;
        for (std::size_t j = 0; j < k; ++j) out.d[j] = (a.d[j] * b.v - a.v * b.d[j]) / (b.v * b.v);
        break;
      case Op::Pow: {
        out.v = std::pow(a.v, b.v);
        const double da = b.v * std::pow(a.v, b.v - 1.0);
        for (std::size_t j = 0; j < k; ++j) {
          double d = a.d[j] == 0.0 ? 0.0 : da * a.d[j];
          // log term only where the exponent varies, so (-2)^2 stays finite
          if (b.d[j] != 0.0) d += out.v * std::log(a.v) * b.d[j];
          out.d[j] = d;
        }
        break;
      }
      default:
        break;
    }
    return out;
  }

  std::vector<std::string> variables_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Level set expr(x, y, z) = 0 clipped to radius r, with an exact gradient.
inline ImplicitSurface implicit_from_expression(std::string_view text, double r) {
  auto e = std::make_shared<const Expression>(Expression::parse(text));
  return ImplicitSurface([e](const Vec3& x) { return (*e)(x); }, [e](const Vec3& x) { return e->gradient(x); }, r);
}

}  // namespace crofton
