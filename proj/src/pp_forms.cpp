#include "kform/pp_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kform/error.hpp"

namespace kform {

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * static_cast<std::size_t>(n - k + j) / static_cast<std::size_t>(j);
  return r;
}

IndexBasis::IndexBasis(int n, int p) : n_(n), p_(p) {
  if (p < 1 || p > n) throw PreconditionError("degree p=" + std::to_string(p) + " out of range for n=" + std::to_string(n));
  std::vector<int> idx(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) idx[k] = k + 1;
  for (;;) {
    members_.emplace_back(idx);
    int k = p - 1;
    while (k >= 0 && idx[k] == n - p + k + 1) --k;
    if (k < 0) break;
    ++idx[k];
    for (int t = k + 1; t < p; ++t) idx[t] = idx[t - 1] + 1;
  }
}

std::size_t IndexBasis::index_of(const MultiIndex& I) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), I);
  if (it == members_.end() || *it != I) throw IndexError("multi-index " + I.to_string() + " not in basis");
  return static_cast<std::size_t>(it - members_.begin());
}

IndexBasis index_basis(int n, int p) { return IndexBasis(n, p); }

CMatrix compound_matrix(const CMatrix& m, int p) {
  const IndexBasis rows(static_cast<int>(m.rows()), p);
  const IndexBasis cols(static_cast<int>(m.cols()), p);
  CMatrix c(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) c(a, b) = minor_det(m, rows[a], cols[b]);
  return c;
}

PPFormMatrix wedge_power_coeffs(const HermitianMatrix& g, int p) {
  IndexBasis basis(static_cast<int>(g.dim()), p);
  CMatrix w(basis.size(), basis.size());
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) w(a, b) = minor_det(g.matrix(), basis[a], basis[b]);
  return {std::move(basis), HermitianMatrix(std::move(w))};
}

PPFormMatrix pullback_coeffs(const MapExpr& F, const SpaceForm& tgt, int p, const Point& w) {
  if (F.size() != static_cast<std::size_t>(tgt.dim()))
    throw DimensionError("map has " + std::to_string(F.size()) + " components, target " + tgt.to_string() +
                         " needs " + std::to_string(tgt.dim()));
  if (w.size() != static_cast<std::size_t>(F.arity())) throw DimensionError("point arity mismatch");
  if (p > F.arity()) throw PreconditionError("degree p exceeds source dimension");
  const Point image = F.evaluate(w);
  const PPFormMatrix h = wedge_power_coeffs(metric(tgt, image), p);
  const CMatrix c = compound_matrix(jacobian(F, w), p);
  return {IndexBasis(F.arity(), p), HermitianMatrix(c.transpose() * h.entries.matrix() * c.conjugate())};
}

PPFormMatrix pullback_pp(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt, int p, const Point& w) {
  if (F.arity() != src.dim())
    throw DimensionError("map arity " + std::to_string(F.arity()) + " does not match source " + src.to_string());
  require_chart_point(src, w);
  return pullback_coeffs(F, tgt, p, w);
}

namespace {

// Shared least-squares fit of Theta = lambda W over a list of sample pairs.
template <class PairAt>
PullbackResult fit_ratio(std::size_t count, double tol, const PairAt& pair_at) {
  if (count == 0) throw PreconditionError("at least one sample point is required");
  PullbackResult res;
  std::vector<std::pair<CMatrix, CMatrix>> pairs;
  pairs.reserve(count);
  double num = 0.0;
  double den = 0.0;
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = -rmin;
  for (std::size_t k = 0; k < count; ++k) {
    auto [theta, w] = pair_at(k);
    const CMatrix& tm = theta.entries.matrix();
    const CMatrix& wm = w.entries.matrix();
    if (!(wm.max_abs() > 1e-14)) throw DegenerateSampleError("reference form vanishes at sample " + std::to_string(k));
    double pn = 0.0;
    double pd = 0.0;
    for (std::size_t e = 0; e < wm.entries().size(); ++e) {
      pn += (std::conj(wm.entries()[e]) * tm.entries()[e]).real();
      pd += std::norm(wm.entries()[e]);
    }
    num += pn;
    den += pd;
    rmin = std::min(rmin, pn / pd);
    rmax = std::max(rmax, pn / pd);
    pairs.emplace_back(tm, wm);
    if (k + 1 == count) res.theta = std::move(theta);
  }
  res.lambdaHat = num / den;
  for (const auto& [tm, wm] : pairs)
    for (std::size_t e = 0; e < wm.entries().size(); ++e)
      res.maxResidual = std::max(res.maxResidual, std::abs(tm.entries()[e] - res.lambdaHat * wm.entries()[e]));
  res.ratioSpread = rmax - rmin;
  res.samples = count;
  res.pass = res.maxResidual < tol * (1.0 + std::abs(res.lambdaHat));
  return res;
}

}  // namespace

PullbackResult proportionality_test(const MapExpr& F, const SpaceForm& src, const SpaceForm& tgt, int p,
                                    const std::vector<Point>& points, double tol) {
  return fit_ratio(points.size(), tol, [&](std::size_t k) {
    return std::pair{pullback_pp(F, src, tgt, p, points[k]), wedge_power_coeffs(metric(src, points[k]), p)};
  });
}

PullbackResult relatives_test(const MapExpr& F, const MapExpr& G, const SpaceForm& tgt1, const SpaceForm& tgt2, int m,
                              int p, const std::vector<Point>& points, double tol) {
  if (F.arity() != m || G.arity() != m) throw DimensionError("both maps must have arity " + std::to_string(m));
  return fit_ratio(points.size(), tol, [&](std::size_t k) {
    return std::pair{pullback_coeffs(F, tgt1, p, points[k]), pullback_coeffs(G, tgt2, p, points[k])};
  });
}

}  // namespace kform
