#include "kform/rigidity.hpp"

#include <algorithm>
#include <cmath>

#include "kform/error.hpp"
#include "kform/pp_forms.hpp"

namespace kform {

bool eigen_products_check(const EigenProfile& profile, double tol) {
  const int m = static_cast<int>(profile.lambdas.size());
  if (profile.p < 1 || profile.p > m) throw PreconditionError("eigen_products_check needs 1 <= p <= m");
  const double lambda = profile.lambdaTarget;
  const IndexBasis subsets(m, profile.p);
  for (const auto& I : subsets.members()) {
    double prod = 1.0;
    for (int i : I.indices()) prod *= profile.lambdas[i - 1];
    if (!(std::abs(prod - lambda) <= tol * std::abs(lambda))) return false;
  }
  return true;
}

std::optional<double> conclude_isometry_factor(const EigenProfile& profile, double tol) {
  const int m = static_cast<int>(profile.lambdas.size());
  if (profile.p >= m)
    throw PreconditionError("p = " + std::to_string(profile.p) + " >= m = " + std::to_string(m) +
                            ": equal p-fold products do not force equal eigenvalues");
  if (!eigen_products_check(profile, tol)) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(profile.lambdas.begin(), profile.lambdas.end());
  double mean = 0.0;
  for (double l : profile.lambdas) mean += l;
  mean /= m;
  if (*hi - *lo > tol * std::abs(mean)) return std::nullopt;
  return mean;
}

EigenProfile eigen_profile(const HermitianMatrix& h, const HermitianMatrix& g, int p, double lambda) {
  return {generalized_eigenvalues(h, g), p, lambda};
}

EigenProfile eigen_profile_at(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt, int p, const Point& w) {
  const HermitianMatrix g = metric(src, w);
  const PPFormMatrix theta1 = pullback_pp(F, src, tgt, 1, w);
  const PPFormMatrix thetap = pullback_pp(F, src, tgt, p, w);
  const PPFormMatrix wp = wedge_power_coeffs(g, p);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t e = 0; e < wp.entries.matrix().entries().size(); ++e) {
    num += (std::conj(wp.entries.matrix().entries()[e]) * thetap.entries.matrix().entries()[e]).real();
    den += std::norm(wp.entries.matrix().entries()[e]);
  }
  return eigen_profile(theta1.entries, g, p, num / den);
}

PointwiseCheck isometry_check(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt,
                              const std::vector<Point>& points, double factor, double tol) {
  PointwiseCheck out;
  for (const auto& w : points) {
    const CMatrix diff = pullback_pp(F, src, tgt, 1, w).entries.matrix() - metric(src, w).matrix() * Complex(factor);
    out.maxResidual = std::max(out.maxResidual, diff.max_abs());
    ++out.used;
  }
  out.pass = out.used > 0 && out.maxResidual < tol;
  return out;
}

PointwiseCheck ricci_pullback_check(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt,
                                    const std::vector<Point>& points, double tol) {
  if (src.dim() != tgt.dim()) throw PreconditionError("ricci_pullback_check needs an equidimensional map");
  if (F.arity() != src.dim() || F.size() != static_cast<std::size_t>(tgt.dim()))
    throw DimensionError("map shape does not match " + src.to_string() + " -> " + tgt.to_string());
  PointwiseCheck out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point& w = points[k];
    require_chart_point(src, w);
    const CMatrix j = jacobian(F, w);
    if (std::abs(det(j)) < 1e-12) {
      out.warnings.push_back("sample " + std::to_string(k) + ": singular Jacobian, skipped");
      continue;
    }
    const CMatrix pulled = j.transpose() * ricci(tgt, F.evaluate(w)).matrix() * j.conjugate();
    out.maxResidual = std::max(out.maxResidual, (pulled - ricci(src, w).matrix()).max_abs());
    ++out.used;
  }
  out.pass = out.used > 0 && out.maxResidual < tol;
  return out;
}

}  // namespace kform
