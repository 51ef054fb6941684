#pragma once

#include <vector>

#include "kform/expr.hpp"
#include "kform/linalg.hpp"
#include "kform/space_form.hpp"

namespace kform {

/// All strictly increasing p-tuples from {1..n}, in lexicographic order.
class IndexBasis {
 public:
  IndexBasis() = default;
  IndexBasis(int n, int p);

  int n() const noexcept { return n_; }
  int p() const noexcept { return p_; }
  std::size_t size() const noexcept { return members_.size(); }
  const MultiIndex& operator[](std::size_t k) const { return members_[k]; }
  const std::vector<MultiIndex>& members() const noexcept { return members_; }

  /// Position of I in the basis; throws IndexError if absent.
  std::size_t index_of(const MultiIndex& I) const;

 private:
  int n_ = 0;
  int p_ = 0;
  std::vector<MultiIndex> members_;
};

IndexBasis index_basis(int n, int p);

/// p-th compound matrix: entry (I, L) = det m[I, L] over the row basis
/// index_basis(rows, p) and column basis index_basis(cols, p).
CMatrix compound_matrix(const CMatrix& m, int p);

/// Coefficients of omega^p over the basis A x A. Entry (I, J) is
/// det(g_{i_s j_t}); the common factor (sqrt(-1))^p p! is dropped, since it
/// appears on both sides of every comparison made by the library.
struct PPFormMatrix {
  IndexBasis basis;
  HermitianMatrix entries;
};

PPFormMatrix wedge_power_coeffs(const HermitianMatrix& g, int p);

/// Coefficients Theta_{L, K} of F^* omega_tgt^p at w, over the source basis:
/// C^T H conj(C) with H = wedge_power_coeffs(g_tgt(F(w)), p) and C the p-th
/// compound of the Jacobian. Only w's arity is checked.
PPFormMatrix pullback_coeffs(const MapExpr& F, const SpaceForm& tgt, int p, const Point& w);

/// pullback_coeffs after checking that w is a chart point of src and that the
/// map's shape matches src -> tgt.
PPFormMatrix pullback_pp(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt, int p, const Point& w);

struct PullbackResult {
  PPFormMatrix theta;         // at the last sample point
  double lambdaHat = 0.0;     // least-squares ratio over all entries and points
  double maxResidual = 0.0;   // max |Theta - lambdaHat * W|
  double ratioSpread = 0.0;   // max - min of the per-point least-squares ratios
  std::size_t samples = 0;
  bool pass = false;          // maxResidual < tol (1 + |lambdaHat|)
};

inline constexpr double kDefaultPassTol = 1e-9;

/// Decides F^* omega_tgt^p = lambda omega_src^p on the given points.
PullbackResult proportionality_test(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt, int p,
                                    const std::vector<Point>& points, double tol = kDefaultPassTol);

/// Decides F^* omega_tgt1^p = lambda G^* omega_tgt2^p for maps F, G defined
/// on a common open set of C^m.
PullbackResult relatives_test(const MapExpr& F, const MapExpr& G, const SpaceForm& tgt1, const SpaceForm& tgt2, int m,
                              int p, const std::vector<Point>& points, double tol = kDefaultPassTol);

/// Binomial coefficient as size_t.
std::size_t binomial(int n, int k);

}  // namespace kform
