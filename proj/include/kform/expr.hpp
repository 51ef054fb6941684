#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kform/error.hpp"
#include "kform/linalg.hpp"

namespace kform {

using Point = std::vector<Complex>;

/// Divisors with modulus at or below this are treated as zero.
inline constexpr double kSingularThreshold = 1e-14;

/// Immutable rational expression in variables z1..zm. Nodes are shared
/// between trees, so copies are cheap.
class Expr {
 public:
  enum class Op { Var, Const, Add, Sub, Mul, Div, Neg, Pow };

  Expr() : Expr(constant(0.0)) {}

  static Expr var(int index);
  static Expr constant(Complex c);

  Op op() const noexcept { return node_->op; }
  int var_index() const noexcept { return node_->index; }
  int exponent() const noexcept { return node_->index; }
  Complex value() const noexcept { return node_->value; }
  const Expr& lhs() const { return *node_->lhs; }
  const Expr& rhs() const { return *node_->rhs; }

  /// Largest variable index referenced (0 for constant trees).
  int max_var_index() const;

  /// Replace z_k by replacements[k-1].
  Expr substitute(std::span<const Expr> replacements) const;

  std::string to_string() const;

  Expr pow(int exponent) const;

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
  friend Expr operator-(const Expr& a);

  /// Evaluate over any commutative ring type T supporting + - * / and unary
  /// minus. `lift` maps a complex constant into T; `is_zero` guards division.
  template <class T, class Lift, class IsZero>
  T evaluate(std::span<const T> vars, const Lift& lift, const IsZero& is_zero) const;

 private:
  struct Node {
    Op op;
    int index = 0;  // variable index (1-based) or integer exponent
    Complex value{};
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
  };

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr binary(Op op, const Expr& a, const Expr& b);

  std::shared_ptr<const Node> node_;
};

template <class T, class Lift, class IsZero>
T Expr::evaluate(std::span<const T> vars, const Lift& lift, const IsZero& is_zero) const {
  switch (op()) {
    case Op::Var:
      if (var_index() < 1 || static_cast<std::size_t>(var_index()) > vars.size())
        throw IndexError("variable z" + std::to_string(var_index()) + " has no value");
      return vars[var_index() - 1];
    case Op::Const:
      return lift(value());
    case Op::Add:
      return lhs().evaluate(vars, lift, is_zero) + rhs().evaluate(vars, lift, is_zero);
    case Op::Sub:
      return lhs().evaluate(vars, lift, is_zero) - rhs().evaluate(vars, lift, is_zero);
    case Op::Mul:
      return lhs().evaluate(vars, lift, is_zero) * rhs().evaluate(vars, lift, is_zero);
    case Op::Div: {
      T den = rhs().evaluate(vars, lift, is_zero);
      if (is_zero(den)) throw SingularEvaluationError("division by zero in " + to_string());
      return lhs().evaluate(vars, lift, is_zero) / den;
    }
    case Op::Neg:
      return -lhs().evaluate(vars, lift, is_zero);
    case Op::Pow: {
      T base = lhs().evaluate(vars, lift, is_zero);
      int k = exponent();
      const bool invert = k < 0;
      if (invert) k = -k;
      T result = lift(1.0);
      T square = base;
      while (k > 0) {
        if (k & 1) result = result * square;
        k >>= 1;
        if (k > 0) square = square * square;
      }
      if (invert) {
        if (is_zero(result)) throw SingularEvaluationError("negative power of zero in " + to_string());
        return lift(1.0) / result;
      }
      return result;
    }
  }
  throw Error("corrupt expression node");
}

/// Parse one component. Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('-'|'+') unary | factor
///   factor := base ('^' ['-'] integer)?
///   base   := number ['i'] | 'i' | 'z' index | '(' expr ')' | sqrt '(' expr ')'
/// Complex literals are written "a+bi". Bare 'z' is accepted when arity is 1.
/// sqrt only takes constant arguments. U+2212, U+00B7, U+00D7 and U+221A are
/// accepted as '-', '*', '*' and sqrt.
Expr parse_expr(std::string_view src, int arity);

/// Holomorphic map z -> (F_1(z), ..., F_n(z)) on C^arity.
class MapExpr {
 public:
  MapExpr() = default;
  MapExpr(std::vector<Expr> components, int arity);

  static MapExpr parse(std::span<const std::string> sources, int arity);
  static MapExpr identity(int n);

  int arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return components_.size(); }
  const Expr& component(std::size_t i) const { return components_.at(i); }
  const std::vector<Expr>& components() const noexcept { return components_; }

  /// (*this) o inner; inner.size() must equal arity().
  MapExpr compose(const MapExpr& inner) const;

  Point evaluate(const Point& pt) const;

 private:
  std::vector<Expr> components_;
  int arity_ = 0;
};

/// First-order jet: value and gradient with respect to the ambient variables.
/// S is the base scalar (Complex, or Dual for directional second derivatives).
template <class S>
struct Jet {
  S value{};
  std::vector<S> grad;

  friend Jet operator+(Jet a, const Jet& b) {
    a.value = a.value + b.value;
    for (std::size_t k = 0; k < a.grad.size(); ++k) a.grad[k] = a.grad[k] + b.grad[k];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    a.value = a.value - b.value;
    for (std::size_t k = 0; k < a.grad.size(); ++k) a.grad[k] = a.grad[k] - b.grad[k];
    return a;
  }
  friend Jet operator-(Jet a) {
    a.value = -a.value;
    for (auto& g : a.grad) g = -g;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet c;
    c.value = a.value * b.value;
    c.grad.resize(a.grad.size());
    for (std::size_t k = 0; k < a.grad.size(); ++k) c.grad[k] = a.grad[k] * b.value + a.value * b.grad[k];
    return c;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet c;
    c.value = a.value / b.value;
    c.grad.resize(a.grad.size());
    for (std::size_t k = 0; k < a.grad.size(); ++k) c.grad[k] = (a.grad[k] - c.value * b.grad[k]) / b.value;
    return c;
  }
};

using Jet1 = Jet<Complex>;

/// Complex dual number a + b eps with eps^2 = 0.
struct Dual {
  Complex a{};
  Complex b{};

  friend Dual operator+(Dual x, Dual y) { return {x.a + y.a, x.b + y.b}; }
  friend Dual operator-(Dual x, Dual y) { return {x.a - y.a, x.b - y.b}; }
  friend Dual operator-(Dual x) { return {-x.a, -x.b}; }
  friend Dual operator*(Dual x, Dual y) { return {x.a * y.a, x.a * y.b + x.b * y.a}; }
  friend Dual operator/(Dual x, Dual y) { return {x.a / y.a, (x.b * y.a - x.a * y.b) / (y.a * y.a)}; }
};

/// Value and exact first partials of one component at pt (arity = pt.size()).
Jet1 eval_jet(const Expr& expr, const Point& pt);

/// n x m matrix of dF_i/dz_j at pt.
CMatrix jacobian(const MapExpr& map, const Point& pt);

/// Jacobian at pt together with its derivative along `direction`:
/// returns {JF(pt), d/dt JF(pt + t direction) at t = 0}.
std::pair<CMatrix, CMatrix> jacobian_with_derivative(const MapExpr& map, const Point& pt,
                                                     std::span<const Complex> direction);

}  // namespace kform
