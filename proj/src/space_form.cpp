#include "kform/space_form.hpp"

#include <cmath>

#include "kform/error.hpp"

namespace kform {

std::string kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Euclidean:
      return "euclidean";
    case SpaceKind::Ball:
      return "ball";
    case SpaceKind::Projective:
      return "projective";
  }
  return "?";
}

SpaceKind parse_kind(std::string_view name) {
  if (name == "euclidean") return SpaceKind::Euclidean;
  if (name == "ball") return SpaceKind::Ball;
  if (name == "projective") return SpaceKind::Projective;
  throw PreconditionError("unknown space form kind '" + std::string(name) + "'");
}

SpaceForm::SpaceForm(SpaceKind kind, int dim, int sig) : kind_(kind), dim_(dim), sig_(sig) {
  if (dim < 1) throw PreconditionError("space form dimension must be >= 1");
  if (sig < 0 || sig > dim) throw PreconditionError("signature must satisfy 0 <= sig <= dim");
}

double SpaceForm::norm_s(std::span<const Complex> w) const {
  double n = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) n += epsilon(j) * std::norm(w[j]);
  return n;
}

double SpaceForm::curvature_constant() const noexcept {
  switch (kind_) {
    case SpaceKind::Euclidean:
      return 0.0;
    case SpaceKind::Ball:
      return -2.0;
    case SpaceKind::Projective:
      return 2.0;
  }
  return 0.0;
}

double SpaceForm::ricci_constant() const noexcept { return 0.5 * curvature_constant() * (dim_ + 1); }

bool SpaceForm::in_chart(std::span<const Complex> w) const {
  if (w.size() != static_cast<std::size_t>(dim_)) return false;
  for (const auto& x : w)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  switch (kind_) {
    case SpaceKind::Euclidean:
      return true;
    case SpaceKind::Ball:
      return norm_s(w) < 1.0;
    case SpaceKind::Projective:
      return 1.0 + norm_s(w) > 0.0;
  }
  return false;
}

std::string SpaceForm::to_string() const {
  std::string s = kind_name(kind_) + "(" + std::to_string(dim_);
  if (!definite()) s += "," + std::to_string(sig_);
  return s + ")";
}

void require_chart_point(const SpaceForm& sf, std::span<const Complex> z) {
  if (z.size() != static_cast<std::size_t>(sf.dim()))
    throw DimensionError("point has " + std::to_string(z.size()) + " coordinates, " + sf.to_string() + " needs " +
                         std::to_string(sf.dim()));
  if (!sf.in_chart(z)) throw DomainError("point outside the chart of " + sf.to_string());
}

ChartPoint::ChartPoint(const SpaceForm& sf, Point coords) : coords_(std::move(coords)) {
  require_chart_point(sf, coords_);
}

namespace {

// sigma = -1 for the ball, +1 for projective space; D = 1 + sigma ||w||_s^2.
double sigma_of(const SpaceForm& sf) { return sf.kind() == SpaceKind::Ball ? -1.0 : 1.0; }

}  // namespace

HermitianMatrix metric(const SpaceForm& sf, const Point& z) {
  require_chart_point(sf, z);
  const std::size_t n = z.size();
  CMatrix g(n, n);
  if (sf.kind() == SpaceKind::Euclidean) {
    for (std::size_t j = 0; j < n; ++j) g(j, j) = sf.epsilon(j);
    return HermitianMatrix(std::move(g));
  }
  const double sigma = sigma_of(sf);
  const double d = 1.0 + sigma * sf.norm_s(z);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      Complex v = -sigma * sf.epsilon(j) * sf.epsilon(k) * std::conj(z[j]) * z[k] / (d * d);
      if (j == k) v += sf.epsilon(j) / d;
      g(j, k) = v;
    }
  return HermitianMatrix(std::move(g));
}

CMatrix metric_derivative(const SpaceForm& sf, const Point& z, std::size_t mu) {
  require_chart_point(sf, z);
  const std::size_t n = z.size();
  if (mu >= n) throw IndexError("derivative index out of range");
  CMatrix dg(n, n);
  if (sf.kind() == SpaceKind::Euclidean) return dg;
  const double sigma = sigma_of(sf);
  const double d = 1.0 + sigma * sf.norm_s(z);
  const Complex dn = sf.epsilon(mu) * std::conj(z[mu]);  // d ||w||_s^2 / d z_mu
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const double ejk = sf.epsilon(j) * sf.epsilon(k);
      Complex v = 2.0 * dn * ejk * std::conj(z[j]) * z[k] / (d * d * d);
      if (k == mu) v -= sigma * ejk * std::conj(z[j]) / (d * d);
      if (j == k) v -= sigma * dn * sf.epsilon(j) / (d * d);
      dg(j, k) = v;
    }
  return dg;
}

HermitianMatrix ricci(const SpaceForm& sf, const Point& z) { return sf.ricci_constant() * metric(sf, z); }

namespace {

void require_vector(const SpaceForm& sf, std::span<const Complex> v) {
  if (v.size() != static_cast<std::size_t>(sf.dim())) throw DimensionError("tangent vector dimension mismatch");
}

Complex curvature_with(const SpaceForm& sf, const CMatrix& g, std::span<const Complex> a, std::span<const Complex> b,
                       std::span<const Complex> u, std::span<const Complex> v) {
  const double c = sf.curvature_constant();
  if (c == 0.0) return 0.0;
  return 0.5 * c * (sesquilinear(g, a, b) * sesquilinear(g, u, v) + sesquilinear(g, a, v) * sesquilinear(g, u, b));
}

std::vector<Complex> basis_vector(std::size_t n, std::size_t k) {
  std::vector<Complex> e(n);
  e[k] = 1.0;
  return e;
}

}  // namespace

Complex curvature(const SpaceForm& sf, const Point& z, std::span<const Complex> a, std::span<const Complex> b,
                  std::span<const Complex> u, std::span<const Complex> v) {
  for (auto x : {a, b, u, v}) require_vector(sf, x);
  const HermitianMatrix g = metric(sf, z);
  return curvature_with(sf, g.matrix(), a, b, u, v);
}

double curvature(const SpaceForm& sf, const Point& z, std::span<const Complex> eta, std::span<const Complex> u) {
  return curvature(sf, z, eta, eta, u, u).real();
}

Complex wedge_curvature(const SpaceForm& sf, const Point& z, std::span<const Complex> a, std::span<const Complex> b,
                        const MultiIndex& I, const MultiIndex& J) {
  require_vector(sf, a);
  require_vector(sf, b);
  const std::size_t p = I.size();
  if (p == 0 || J.size() != p) throw IndexError("wedge_curvature needs |I| = |J| >= 1");
  const std::size_t n = z.size();
  for (const auto* idx : {&I, &J})
    if (static_cast<std::size_t>(idx->back()) > static_cast<std::size_t>(sf.dim()))
      throw IndexError("multi-index " + idx->to_string() + " exceeds dimension");
  const HermitianMatrix g = metric(sf, z);
  if (sf.curvature_constant() == 0.0) return 0.0;
  const CMatrix gIJ = g.matrix().select(I, J);
  Complex total = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    CMatrix mk = gIJ;
    const auto ek = basis_vector(n, I[k] - 1);
    for (std::size_t t = 0; t < p; ++t) {
      const auto et = basis_vector(n, J[t] - 1);
      mk(k, t) = curvature_with(sf, g.matrix(), a, b, ek, et);
    }
    total += det(mk);
  }
  return total;
}

Complex wedge_curvature(const SpaceForm& sf, const Point& z, std::span<const Complex> eta, const MultiIndex& I,
                        const MultiIndex& J) {
  return wedge_curvature(sf, z, eta, eta, I, J);
}

namespace {

void require_recenterable(const SpaceForm& sf, const Point& a) {
  require_chart_point(sf, a);
  if (!sf.definite() && sf.kind() != SpaceKind::Euclidean)
    throw DomainError("recentering is only available for definite space forms or C^n_s");
}

MapExpr translation(const Point& a, double sign) {
  std::vector<Expr> comps;
  for (std::size_t j = 0; j < a.size(); ++j)
    comps.push_back(Expr::var(static_cast<int>(j + 1)) + Expr::constant(sign * a[j]));
  return MapExpr(std::move(comps), static_cast<int>(a.size()));
}

// phi_a(z) = (a - A z) / (1 - <z, a>), A = s I + (1 - s) a a^* / |a|^2,
// s = sqrt(1 - |a|^2). An involution exchanging 0 and a.
MapExpr moebius(const Point& a) {
  const std::size_t n = a.size();
  double na = 0.0;
  for (const auto& x : a) na += std::norm(x);
  if (na == 0.0) return MapExpr::identity(static_cast<int>(n));
  const double s = std::sqrt(1.0 - na);
  Expr den = Expr::constant(1.0);
  for (std::size_t k = 0; k < n; ++k) den = den - Expr::constant(std::conj(a[k])) * Expr::var(static_cast<int>(k + 1));
  std::vector<Expr> comps;
  for (std::size_t j = 0; j < n; ++j) {
    Expr num = Expr::constant(a[j]);
    for (std::size_t k = 0; k < n; ++k) {
      Complex akj = (1.0 - s) * a[j] * std::conj(a[k]) / na;
      if (j == k) akj += s;
      num = num - Expr::constant(akj) * Expr::var(static_cast<int>(k + 1));
    }
    comps.push_back(num / den);
  }
  return MapExpr(std::move(comps), static_cast<int>(n));
}

// Householder reflection H of C^{n+1} with H (1, a)/|(1, a)| = e_0, read in
// the chart U_0: z -> (H(1,z))_j / (H(1,z))_0. H is an involution.
MapExpr householder(const Point& a) {
  const std::size_t n = a.size();
  double na = 0.0;
  for (const auto& x : a) na += std::norm(x);
  if (na == 0.0) return MapExpr::identity(static_cast<int>(n));
  const double len = std::sqrt(1.0 + na);
  std::vector<Complex> v(n + 1);
  v[0] = 1.0 / len - 1.0;
  for (std::size_t j = 0; j < n; ++j) v[j + 1] = a[j] / len;
  double vv = 0.0;
  for (const auto& x : v) vv += std::norm(x);
  auto h = [&](std::size_t r, std::size_t c) {
    Complex val = -2.0 * v[r] * std::conj(v[c]) / vv;
    if (r == c) val += 1.0;
    return val;
  };
  auto row = [&](std::size_t r) {
    Expr e = Expr::constant(h(r, 0));
    for (std::size_t k = 0; k < n; ++k) e = e + Expr::constant(h(r, k + 1)) * Expr::var(static_cast<int>(k + 1));
    return e;
  };
  const Expr den = row(0);
  std::vector<Expr> comps;
  for (std::size_t j = 1; j <= n; ++j) comps.push_back(row(j) / den);
  return MapExpr(std::move(comps), static_cast<int>(n));
}

}  // namespace

MapExpr recentering_map(const SpaceForm& sf, const Point& a) {
  require_recenterable(sf, a);
  switch (sf.kind()) {
    case SpaceKind::Euclidean:
      return translation(a, -1.0);
    case SpaceKind::Ball:
      return moebius(a);
    case SpaceKind::Projective:
      return householder(a);
  }
  throw Error("unknown space form kind");
}

MapExpr recentering_inverse(const SpaceForm& sf, const Point& a) {
  require_recenterable(sf, a);
  if (sf.kind() == SpaceKind::Euclidean) return translation(a, 1.0);
  return recentering_map(sf, a);
}

double default_sampling_radius(const SpaceForm& sf) { return sf.kind() == SpaceKind::Ball ? 0.9 : 2.0; }

}  // namespace kform
