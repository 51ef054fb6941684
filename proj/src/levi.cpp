#include "kform/levi.hpp"

#include <algorithm>
#include <cmath>

#include "kform/error.hpp"

namespace kform {

namespace {

void require_fiber(const SpaceForm& sf, int p, std::span<const Complex> xi) {
  if (xi.size() != binomial(sf.dim(), p))
    throw DimensionError("fiber vector has " + std::to_string(xi.size()) + " entries, expected " +
                         std::to_string(binomial(sf.dim(), p)));
}

std::vector<Complex> unit(std::size_t n, std::size_t k) {
  std::vector<Complex> e(n);
  e[k] = 1.0;
  return e;
}

// -Theta_{wedge^p T}(e_l, conj e_k, xi, conj xi) for all l, k.
CMatrix base_block(const SpaceForm& sf, int p, const Point& z, std::span<const Complex> xi) {
  const std::size_t m = static_cast<std::size_t>(sf.dim());
  const IndexBasis basis(sf.dim(), p);
  CMatrix h(m, m);
  if (sf.curvature_constant() == 0.0) return h;
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t k = 0; k < m; ++k) {
      const auto el = unit(m, l);
      const auto ek = unit(m, k);
      Complex sum = 0.0;
      for (std::size_t a = 0; a < basis.size(); ++a) {
        if (xi[a] == Complex{}) continue;
        for (std::size_t b = 0; b < basis.size(); ++b) {
          if (xi[b] == Complex{}) continue;
          sum += xi[a] * std::conj(xi[b]) * wedge_curvature(sf, z, el, ek, basis[a], basis[b]);
        }
      }
      h(l, k) = -sum;
    }
  return h;
}

LeviReport report_from(const CMatrix& restricted, double zero_tol) {
  const HermitianMatrix l(restricted);
  LeviReport rep;
  rep.eigenvalues = hermitian_eigen(l).eigenvalues;
  rep.signature = signature_of(rep.eigenvalues, zero_tol);
  rep.dimension = l.dim();
  return rep;
}

}  // namespace

double rho(const SpaceForm& sf, int p, double r, const Point& z, std::span<const Complex> xi, double scale) {
  require_fiber(sf, p, xi);
  const PPFormMatrix w = wedge_power_coeffs(metric(sf, z), p);
  return scale * hermitian_form(w.entries, xi) - r;
}

std::vector<Complex> rho_gradient(const SpaceForm& sf, int p, const Point& z, std::span<const Complex> xi) {
  require_fiber(sf, p, xi);
  const std::size_t m = static_cast<std::size_t>(sf.dim());
  const IndexBasis basis(sf.dim(), p);
  const HermitianMatrix g = metric(sf, z);
  const PPFormMatrix w = wedge_power_coeffs(g, p);
  std::vector<Complex> grad(m + basis.size());
  for (std::size_t mu = 0; mu < m; ++mu) {
    const CMatrix dg = metric_derivative(sf, z, mu);
    Complex sum = 0.0;
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const CMatrix gIJ = g.matrix().select(basis[a], basis[b]);
        const CMatrix dIJ = dg.select(basis[a], basis[b]);
        Complex dminor = 0.0;
        for (std::size_t s = 0; s < static_cast<std::size_t>(p); ++s) {
          CMatrix ms = gIJ;
          for (std::size_t t = 0; t < static_cast<std::size_t>(p); ++t) ms(s, t) = dIJ(s, t);
          dminor += det(ms);
        }
        sum += dminor * xi[a] * std::conj(xi[b]);
      }
    grad[mu] = sum;
  }
  for (std::size_t a = 0; a < basis.size(); ++a) {
    Complex sum = 0.0;
    for (std::size_t b = 0; b < basis.size(); ++b) sum += w.entries(a, b) * std::conj(xi[b]);
    grad[m + a] = sum;
  }
  return grad;
}

SphereBundlePoint::SphereBundlePoint(const SpaceForm& sf, int p, double r, Point base, std::vector<Complex> fiber)
    : base_(std::move(base)), fiber_(std::move(fiber)) {
  if (!(r > 0.0)) throw PreconditionError("sphere bundle radius must be positive");
  const double len = rho(sf, p, 0.0, base_, fiber_);
  if (!(len > 0.0)) throw DomainError("fiber vector has non-positive length");
  const double s = std::sqrt(r / len);
  for (auto& x : fiber_) x *= s;
}

CMatrix tangent_basis(const SpaceForm& sf, int p, const Point& z, std::span<const Complex> xi) {
  require_fiber(sf, p, xi);
  if (std::all_of(xi.begin(), xi.end(), [](Complex c) { return c == Complex{}; }))
    throw PreconditionError("fiber vector must be nonzero");
  const std::size_t m = static_cast<std::size_t>(sf.dim());
  const std::size_t na = xi.size();
  const auto grad = rho_gradient(sf, p, z, xi);
  std::size_t i0 = 0;
  for (std::size_t a = 1; a < na; ++a)
    if (std::abs(grad[m + a]) > std::abs(grad[m + i0])) i0 = a;
  if (!(std::abs(grad[m + i0]) > 0.0)) throw DomainError("defining function is critical in the fiber");
  const Complex pivot = grad[m + i0];
  CMatrix basis(m + na, m + na - 1);
  std::size_t col = 0;
  for (std::size_t mu = 0; mu < m; ++mu, ++col) {
    basis(mu, col) = 1.0;
    basis(m + i0, col) = -grad[mu] / pivot;
  }
  for (std::size_t a = 0; a < na; ++a) {
    if (a == i0) continue;
    basis(m + a, col) = 1.0;
    basis(m + i0, col) = -grad[m + a] / pivot;
    ++col;
  }
  return basis;
}

LeviReport levi_form(const SpaceForm& sf, int p, double r, const Point& z, std::span<const Complex> xi,
                     double zero_tol) {
  if (!sf.definite()) throw DomainError("levi_form supports definite space forms only");
  const SphereBundlePoint pt(sf, p, r, z, std::vector<Complex>(xi.begin(), xi.end()));
  const MapExpr phi = recentering_map(sf, pt.base());
  const CMatrix transport = compound_matrix(jacobian(phi, pt.base()), p);
  const std::vector<Complex> xi0 = transport.apply(pt.fiber());
  const std::size_t m = static_cast<std::size_t>(sf.dim());
  const Point center(m);

  const CMatrix hz = base_block(sf, p, center, xi0);
  const std::size_t na = xi0.size();
  CMatrix h(m + na, m + na);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t k = 0; k < m; ++k) h(l, k) = hz(l, k);
  for (std::size_t a = 0; a < na; ++a) h(m + a, m + a) = 1.0;

  const CMatrix basis = tangent_basis(sf, p, center, xi0);
  return report_from(basis.transpose() * h * basis.conjugate(), zero_tol);
}

LeviReport levi_form_numeric(const SpaceForm& sf, int p, double r, const Point& z, std::span<const Complex> xi,
                             double step, double zero_tol) {
  const SphereBundlePoint pt(sf, p, r, z, std::vector<Complex>(xi.begin(), xi.end()));
  const std::size_t m = static_cast<std::size_t>(sf.dim());
  const CMatrix basis = tangent_basis(sf, p, pt.base(), pt.fiber());
  std::vector<Complex> x(pt.base());
  x.insert(x.end(), pt.fiber().begin(), pt.fiber().end());
  auto f = [&](const std::vector<Complex>& y) {
    const Point zz(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m));
    return rho(sf, p, r, zz, std::span<const Complex>(y).subspan(m));
  };
  const std::size_t d = basis.cols();
  std::vector<std::vector<Complex>> cols(d, std::vector<Complex>(basis.rows()));
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t rr = 0; rr < basis.rows(); ++rr) cols[c][rr] = basis(rr, c);
  const Complex phases[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  CMatrix l(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      Complex b = 0.0;
      for (const Complex ph : phases) {
        std::vector<Complex> v(cols[i]);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += ph * cols[j][k];
        b += ph * complex_hessian_fd(f, x, v, step);
      }
      l(i, j) = 0.25 * b;
      l(j, i) = std::conj(l(i, j));
    }
  for (std::size_t i = 0; i < d; ++i) l(i, i) = complex_hessian_fd(f, x, cols[i], step);
  return report_from(l, zero_tol);
}

CMatrix compound_derivative(const CMatrix& m, const CMatrix& dm, int p) {
  const IndexBasis rows(static_cast<int>(m.rows()), p);
  const IndexBasis cols(static_cast<int>(m.cols()), p);
  CMatrix c(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const CMatrix sub = m.select(rows[a], cols[b]);
      const CMatrix dsub = dm.select(rows[a], cols[b]);
      Complex sum = 0.0;
      for (std::size_t s = 0; s < static_cast<std::size_t>(p); ++s) {
        CMatrix ms = sub;
        for (std::size_t t = 0; t < static_cast<std::size_t>(p); ++t) ms(s, t) = dsub(s, t);
        sum += det(ms);
      }
      c(a, b) = sum;
    }
  return c;
}

namespace {

// -Theta_{wedge^p T}(a, conj a, v, conj v).
double horizontal_levi(const SpaceForm& sf, int p, const Point& z, std::span<const Complex> a,
                       std::span<const Complex> v) {
  if (sf.curvature_constant() == 0.0) return 0.0;
  const IndexBasis basis(sf.dim(), p);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      sum += v[i] * std::conj(v[j]) * wedge_curvature(sf, z, a, a, basis[i], basis[j]);
  return -sum.real();
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

}  // namespace

ProbeResult obstruction_probe(const SpaceForm& src, const SpaceForm& tgt, const MapExpr& F, int p, const Point& w,
                              std::span<const Complex> xi, std::optional<std::vector<Complex>> eta, double tol) {
  if (!src.definite() || !tgt.definite()) throw DomainError("obstruction_probe needs definite space forms");
  if (F.arity() != src.dim() || F.size() != static_cast<std::size_t>(tgt.dim()))
    throw DimensionError("map shape does not match " + src.to_string() + " -> " + tgt.to_string());
  if (p < 1 || p > src.dim() || p > tgt.dim()) throw PreconditionError("degree p out of range");
  require_fiber(src, p, xi);
  require_chart_point(src, w);
  const Point fw = F.evaluate(w);
  require_chart_point(tgt, fw);

  const std::size_t m = static_cast<std::size_t>(src.dim());
  const Point origin(m);
  const MapExpr phi1 = recentering_map(src, w);
  const MapExpr G = recentering_map(tgt, fw).compose(F.compose(recentering_inverse(src, w)));

  std::vector<Complex> v = compound_matrix(jacobian(phi1, w), p).apply(xi);
  const double vn = std::sqrt(norm2(v));
  if (!(vn > 0.0)) throw PreconditionError("fiber vector must be nonzero");
  for (auto& x : v) x /= vn;

  auto pushforward = [&](std::span<const Complex> e) {
    auto [j0, j1] = jacobian_with_derivative(G, origin, e);
    std::vector<Complex> x = j0.apply(e);
    std::vector<Complex> y = compound_derivative(j0, j1, p).apply(v);
    return std::tuple{x, y, compound_matrix(j0, p).apply(v)};
  };

  std::vector<std::vector<Complex>> candidates;
  if (eta) {
    if (eta->size() != m) throw DimensionError("eta must have source dimension");
    const double en = std::sqrt(norm2(*eta));
    if (!(en > 0.0)) throw PreconditionError("eta must be nonzero");
    std::vector<Complex> e(*eta);
    for (auto& x : e) x /= en;
    candidates.push_back(std::move(e));
  } else {
    for (std::size_t k = 0; k < m; ++k) candidates.push_back(unit(m, k));
    const CMatrix j = jacobian(G, origin);
    const EigenDecomposition ed = hermitian_eigen(HermitianMatrix(j.adjoint() * j));
    std::vector<Complex> top(m);
    for (std::size_t k = 0; k < m; ++k) top[k] = ed.basis(k, m - 1);
    candidates.push_back(std::move(top));
  }

  ProbeResult res;
  double best = -1.0;
  std::vector<Complex> bx, by, bxi2;
  for (const auto& e : candidates) {
    auto [x, y, xi2] = pushforward(e);
    const double n = std::sqrt(norm2(x) + norm2(y));
    if (n > best) {
      best = n;
      res.eta = e;
      bx = std::move(x);
      by = std::move(y);
      bxi2 = std::move(xi2);
    }
  }
  res.pushforward_norm = best;
  res.lhs = horizontal_levi(src, p, origin, res.eta, v);
  if (!(best > 1e-12)) {
    res.inconclusive = true;
    return res;
  }
  const Point tcenter(static_cast<std::size_t>(tgt.dim()));
  res.rhs = horizontal_levi(tgt, p, tcenter, bx, bxi2) + norm2(by);
  res.conflict = res.lhs <= tol && res.rhs > tol;
  return res;
}

}  // namespace kform
