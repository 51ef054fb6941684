#include "kform/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace kform {

Expr Expr::var(int index) {
  if (index < 1) throw IndexError("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::constant(Complex c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::make_shared<const Expr>(a);
  n->rhs = std::make_shared<const Expr>(b);
  return Expr(std::move(n));
}

Expr operator-(const Expr& a) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Neg;
  n->lhs = std::make_shared<const Expr>(a);
  return Expr(std::move(n));
}

Expr Expr::pow(int exponent) const {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->index = exponent;
  n->lhs = std::make_shared<const Expr>(*this);
  return Expr(std::move(n));
}

int Expr::max_var_index() const {
  switch (op()) {
    case Op::Var:
      return var_index();
    case Op::Const:
      return 0;
    case Op::Neg:
    case Op::Pow:
      return lhs().max_var_index();
    default:
      return std::max(lhs().max_var_index(), rhs().max_var_index());
  }
}

Expr Expr::substitute(std::span<const Expr> replacements) const {
  switch (op()) {
    case Op::Var:
      if (static_cast<std::size_t>(var_index()) > replacements.size())
        throw IndexError("no replacement for z" + std::to_string(var_index()));
      return replacements[var_index() - 1];
    case Op::Const:
      return *this;
    case Op::Neg:
      return -lhs().substitute(replacements);
    case Op::Pow:
      return lhs().substitute(replacements).pow(exponent());
    default:
      return binary(op(), lhs().substitute(replacements), rhs().substitute(replacements));
  }
}

namespace {

std::string format_complex(Complex c) {
  std::ostringstream os;
  os.precision(17);
  if (c.imag() == 0.0) {
    os << c.real();
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

}  // namespace

std::string Expr::to_string() const {
  switch (op()) {
    case Op::Var:
      return "z" + std::to_string(var_index());
    case Op::Const:
      return format_complex(value());
    case Op::Add:
      return "(" + lhs().to_string() + "+" + rhs().to_string() + ")";
    case Op::Sub:
      return "(" + lhs().to_string() + "-" + rhs().to_string() + ")";
    case Op::Mul:
      return lhs().to_string() + "*" + rhs().to_string();
    case Op::Div:
      return lhs().to_string() + "/(" + rhs().to_string() + ")";
    case Op::Neg:
      return "(-" + lhs().to_string() + ")";
    case Op::Pow:
      return "(" + lhs().to_string() + ")^" + std::to_string(exponent());
  }
  return "?";
}

namespace {

class Parser {
 public:
  Parser(std::string_view src, int arity) : src_(src), arity_(arity) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool starts_with(std::string_view s) const { return src_.substr(pos_).substr(0, s.size()) == s; }

  // Returns the operator character at the cursor, folding accepted Unicode
  // spellings, without consuming it. 0 if none.
  char peek_op(std::size_t* width) {
    skip_space();
    if (pos_ >= src_.size()) return 0;
    static constexpr std::pair<std::string_view, char> kAliases[] = {
        {"−", '-'}, {"·", '*'}, {"×", '*'}, {"√", 'r'}};
    for (const auto& [spelling, op] : kAliases) {
      if (starts_with(spelling)) {
        *width = spelling.size();
        return op;
      }
    }
    *width = 1;
    return src_[pos_];
  }

  bool accept(char op) {
    std::size_t w = 0;
    if (peek_op(&w) == op) {
      pos_ += w;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e = e + term();
      else if (accept('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*'))
        e = e * unary();
      else if (accept('/'))
        e = e / unary();
      else
        return e;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return factor();
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) {
      skip_space();
      bool negative = accept('-');
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      int k = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, k);
      if (ec != std::errc()) fail("exponent out of range");
      return b.pow(negative ? -k : k);
    }
    return b;
  }

  Expr constant_sqrt(const Expr& arg, std::size_t at) {
    if (arg.max_var_index() != 0) throw ParseError(at, "sqrt only accepts constant arguments");
    const std::vector<Complex> none;
    const Complex v = arg.evaluate<Complex>(
        std::span<const Complex>(none), [](Complex c) { return c; }, [](Complex c) { return c == Complex{}; });
    return Expr::constant(std::sqrt(v));
  }

  Expr base() {
    std::size_t w = 0;
    const char c = peek_op(&w);
    const std::size_t at = pos_;
    if (c == 0) fail("unexpected end of input");
    if (c == '(') {
      pos_ += w;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (c == 'r') {  // U+221A
      pos_ += w;
      return constant_sqrt(base(), at);
    }
    if (starts_with("sqrt")) {
      pos_ += 4;
      if (!accept('(')) fail("expected '(' after sqrt");
      Expr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return constant_sqrt(arg, at);
    }
    if (c == 'z') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      int index = 1;
      if (start == pos_) {
        if (arity_ != 1) throw ParseError(at, "bare 'z' is only allowed for arity 1");
      } else {
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, index);
        if (ec != std::errc()) throw ParseError(at, "bad variable index");
      }
      if (index < 1 || index > arity_)
        throw ParseError(at, "variable z" + std::to_string(index) + " out of range for arity " +
                                 std::to_string(arity_));
      return Expr::var(index);
    }
    if (c == 'i') {
      ++pos_;
      return Expr::constant(Complex(0.0, 1.0));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (exp_start == pos_) pos_ = save;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError(start, "malformed number");
    if (pos_ < src_.size() && src_[pos_] == 'i') {
      ++pos_;
      return Expr::constant(Complex(0.0, v));
    }
    return Expr::constant(v);
  }

  std::string_view src_;
  int arity_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view src, int arity) {
  if (arity < 1) throw PreconditionError("arity must be >= 1");
  return Parser(src, arity).parse();
}

MapExpr::MapExpr(std::vector<Expr> components, int arity) : components_(std::move(components)), arity_(arity) {
  if (arity_ < 1) throw PreconditionError("map arity must be >= 1");
  for (const auto& c : components_)
    if (c.max_var_index() > arity_)
      throw IndexError("component references z" + std::to_string(c.max_var_index()) + " beyond arity " +
                       std::to_string(arity_));
}

MapExpr MapExpr::parse(std::span<const std::string> sources, int arity) {
  std::vector<Expr> comps;
  comps.reserve(sources.size());
  for (const auto& s : sources) comps.push_back(parse_expr(s, arity));
  return MapExpr(std::move(comps), arity);
}

MapExpr MapExpr::identity(int n) {
  std::vector<Expr> comps;
  for (int k = 1; k <= n; ++k) comps.push_back(Expr::var(k));
  return MapExpr(std::move(comps), n);
}

MapExpr MapExpr::compose(const MapExpr& inner) const {
  if (inner.size() != static_cast<std::size_t>(arity_))
    throw DimensionError("composition: inner map has " + std::to_string(inner.size()) + " components, outer arity " +
                         std::to_string(arity_));
  std::vector<Expr> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back(c.substitute(inner.components()));
  return MapExpr(std::move(comps), inner.arity());
}

Point MapExpr::evaluate(const Point& pt) const {
  if (pt.size() != static_cast<std::size_t>(arity_)) throw DimensionError("point arity mismatch");
  Point out;
  out.reserve(components_.size());
  for (const auto& c : components_)
    out.push_back(c.evaluate<Complex>(
        std::span<const Complex>(pt), [](Complex v) { return v; },
        [](Complex v) { return !(std::abs(v) > kSingularThreshold); }));
  return out;
}

namespace {

template <class S>
std::vector<Jet<S>> seed_jets(std::span<const S> values) {
  const std::size_t m = values.size();
  std::vector<Jet<S>> vars(m);
  for (std::size_t k = 0; k < m; ++k) {
    vars[k].value = values[k];
    vars[k].grad.assign(m, S{});
    vars[k].grad[k] = S{Complex(1.0)};
  }
  return vars;
}

}  // namespace

Jet1 eval_jet(const Expr& expr, const Point& pt) {
  if (static_cast<std::size_t>(expr.max_var_index()) > pt.size()) throw DimensionError("point arity mismatch");
  for (const auto& x : pt)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw DomainError("non-finite point coordinate");
  const auto vars = seed_jets<Complex>(pt);
  const std::size_t m = pt.size();
  return expr.evaluate<Jet1>(
      std::span<const Jet1>(vars), [m](Complex c) { return Jet1{c, std::vector<Complex>(m)}; },
      [](const Jet1& j) { return !(std::abs(j.value) > kSingularThreshold); });
}

CMatrix jacobian(const MapExpr& map, const Point& pt) {
  if (pt.size() != static_cast<std::size_t>(map.arity())) throw DimensionError("point arity mismatch");
  CMatrix j(map.size(), pt.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Jet1 jet = eval_jet(map.component(i), pt);
    for (std::size_t k = 0; k < pt.size(); ++k) j(i, k) = jet.grad[k];
  }
  if (!j.all_finite()) throw SingularEvaluationError("non-finite Jacobian entry");
  return j;
}

std::pair<CMatrix, CMatrix> jacobian_with_derivative(const MapExpr& map, const Point& pt,
                                                     std::span<const Complex> direction) {
  const std::size_t m = pt.size();
  if (m != static_cast<std::size_t>(map.arity()) || direction.size() != m)
    throw DimensionError("point/direction arity mismatch");
  std::vector<Dual> base(m);
  for (std::size_t k = 0; k < m; ++k) base[k] = Dual{pt[k], direction[k]};
  const auto vars = seed_jets<Dual>(base);
  using DJet = Jet<Dual>;
  CMatrix j0(map.size(), m), j1(map.size(), m);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const DJet jet = map.component(i).evaluate<DJet>(
        std::span<const DJet>(vars), [m](Complex c) { return DJet{Dual{c, 0.0}, std::vector<Dual>(m)}; },
        [](const DJet& j) { return !(std::abs(j.value.a) > kSingularThreshold); });
    for (std::size_t k = 0; k < m; ++k) {
      j0(i, k) = jet.grad[k].a;
      j1(i, k) = jet.grad[k].b;
    }
  }
  return {j0, j1};
}

}  // namespace kform
