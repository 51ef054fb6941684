#pragma once

#include <string>
#include <vector>

#include "kform/expr.hpp"
#include "kform/linalg.hpp"

namespace kform {

/// Truncated series sum_{j,k <= N} c_{jk} zeta^j conj(zeta)^k. Products are
/// truncated to the box j, k <= N.
class BiSeries {
 public:
  explicit BiSeries(int order);
  BiSeries(int order, CMatrix coeffs);

  static BiSeries constant(int order, Complex c);
  /// zeta^j conj(zeta)^k.
  static BiSeries monomial(int order, int j, int k, Complex c = 1.0);
  /// f conj(g) for one-variable Taylor coefficient lists f, g.
  static BiSeries from_holomorphic_product(int order, std::span<const Complex> f, std::span<const Complex> g);

  int order() const noexcept { return order_; }
  const Complex& operator()(int j, int k) const { return c_(j, k); }
  Complex& operator()(int j, int k) { return c_(j, k); }
  const CMatrix& coeffs() const noexcept { return c_; }

  BiSeries& operator+=(const BiSeries& o);
  BiSeries& operator-=(const BiSeries& o);
  friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
  friend BiSeries operator-(BiSeries a, const BiSeries& b) { return a -= b; }
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
  friend BiSeries operator*(Complex s, BiSeries a);

  /// 1 / s by recursive coefficient solve; needs c_00 != 0.
  BiSeries reciprocal() const;
  /// Integer power, negative exponents through reciprocal().
  BiSeries pow(int k) const;

  /// Series of zeta -> s(e^{i theta} zeta).
  BiSeries rotate(double theta) const;

  Complex evaluate(Complex zeta) const;

  /// max |c_jk - conj(c_kj)|.
  double hermitian_defect() const;

 private:
  void require_same_order(const BiSeries& o) const;

  int order_;
  CMatrix c_;
};

/// Taylor coefficients a_0..a_N of a one-variable holomorphic function,
/// with truncated arithmetic. Used to restrict maps to the slice (zeta,0,..).
struct Taylor1 {
  std::vector<Complex> a;

  friend Taylor1 operator+(const Taylor1& x, const Taylor1& y);
  friend Taylor1 operator-(const Taylor1& x, const Taylor1& y);
  friend Taylor1 operator-(const Taylor1& x);
  friend Taylor1 operator*(const Taylor1& x, const Taylor1& y);
  friend Taylor1 operator/(const Taylor1& x, const Taylor1& y);
};

/// Taylor coefficients to order N of zeta -> F_i(zeta, 0, ..., 0).
std::vector<std::vector<Complex>> slice_taylor(const MapExpr& F, int order);

/// (1 - zeta conj zeta)^{-(p+1)}.
BiSeries ball_slice(int p, int order);
/// (1 + zeta conj zeta)^{-(p+1)}.
BiSeries proj_slice(int p, int order);
/// (1 + ||F(zeta,0,..,0)||^2)^{2p} ball_slice(p).
BiSeries psi_series(int p, const MapExpr& F, int order);

/// Built-in by name: "ball_slice", "proj_slice" or "psi" (psi needs F).
BiSeries builtin_series(const std::string& name, int p, int order, const MapExpr* F = nullptr);

inline constexpr double kDefaultRankTol = 1e-10;

/// Numerical rank of the coefficient matrix by full-pivot elimination with
/// threshold tol * max |c|.
std::size_t coeff_rank(const BiSeries& s, double tol = kDefaultRankTol);

struct RankGrowth {
  std::vector<std::pair<int, std::size_t>> table;  // (order, rank)
  std::string hint;                                // "bounded" | "growing"
};

/// Ranks of a built-in series over ascending truncation orders. The hint is
/// "bounded" when the last three ranks agree, "growing" otherwise.
RankGrowth rank_growth(const std::string& name, int p, const std::vector<int>& orders, const MapExpr* F = nullptr,
                       double tol = kDefaultRankTol);

/// Same table for an arbitrary series family indexed by order.
template <class Make>
RankGrowth rank_growth_of(const Make& make, const std::vector<int>& orders, double tol = kDefaultRankTol);

std::string growth_hint(const std::vector<std::pair<int, std::size_t>>& table);

template <class Make>
RankGrowth rank_growth_of(const Make& make, const std::vector<int>& orders, double tol) {
  RankGrowth out;
  for (int n : orders) out.table.emplace_back(n, coeff_rank(make(n), tol));
  out.hint = growth_hint(out.table);
  return out;
}

}  // namespace kform
