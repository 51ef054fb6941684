#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kform/expr.hpp"
#include "kform/linalg.hpp"
#include "kform/space_form.hpp"

namespace kform {

/// Generalized eigenvalues of F^* omega_N against omega_M at one point,
/// together with the degree p and the constant lambda of F^* omega_N^p =
/// lambda omega_M^p.
struct EigenProfile {
  std::vector<double> lambdas;  // ascending
  int p = 1;
  double lambdaTarget = 0.0;
};

/// Relative spread tolerated when recovering lambda^{1/p}.
inline constexpr double kIsometrySpreadTol = 1e-8;

/// True iff every product over a p-subset of lambdas is within tol * lambda
/// of lambdaTarget. Requires 1 <= p <= m.
bool eigen_products_check(const EigenProfile& profile, double tol);

/// For p < m, the common eigenvalue lambda^{1/p} when the product check passes
/// and the eigenvalues agree to relative `tol`; nullopt otherwise. Throws
/// PreconditionError for p >= m, where equal products do not force equal
/// eigenvalues.
std::optional<double> conclude_isometry_factor(const EigenProfile& profile, double tol = kIsometrySpreadTol);

/// Profile from a pulled-back (1,1) coefficient matrix h against a positive
/// definite base g.
EigenProfile eigen_profile(const HermitianMatrix& h, const HermitianMatrix& g, int p, double lambda);

/// Profile of F at w: eigenvalues of F^* omega_tgt against omega_src, with
/// lambdaTarget the least-squares ratio of the degree-p pullback at w.
EigenProfile eigen_profile_at(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt, int p, const Point& w);

struct PointwiseCheck {
  bool pass = false;
  double maxResidual = 0.0;
  std::size_t used = 0;               // points that entered the verdict
  std::vector<std::string> warnings;  // skipped points
};

/// F^* omega_tgt = factor * omega_src at every point, max entry residual < tol.
PointwiseCheck isometry_check(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt,
                              const std::vector<Point>& points, double factor, double tol);

/// J^T Ric_tgt(F(w)) conj(J) = Ric_src(w) for equidimensional F, max entry
/// residual < tol. Points with |det J| < 1e-12 are skipped with a warning;
/// the check fails if no point is usable.
PointwiseCheck ricci_pullback_check(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt,
                                    const std::vector<Point>& points, double tol);

}  // namespace kform
