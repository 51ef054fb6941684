#pragma once

#include <optional>
#include <vector>

#include "kform/expr.hpp"
#include "kform/linalg.hpp"
#include "kform/pp_forms.hpp"
#include "kform/space_form.hpp"

namespace kform {

/// rho_r(z, xi) = scale * omega^p(z)(xi, conj xi) - r, with omega^p taken
/// from wedge_power_coeffs (so the overall constant is 1). xi is indexed by
/// index_basis(dim, p).
double rho(const SpaceForm& sf, int p, double r, const Point& z, std::span<const Complex> xi, double scale = 1.0);

/// Holomorphic gradient of rho_r at (z, xi): m entries d/dz_mu followed by
/// |A| entries d/dxi_I.
std::vector<Complex> rho_gradient(const SpaceForm& sf, int p, const Point& z, std::span<const Complex> xi);

/// Point of the sphere bundle S_r. Construction rescales xi so that
/// rho_r(z, xi) = 0; throws DomainError if omega^p(z)(xi, conj xi) <= 0.
class SphereBundlePoint {
 public:
  SphereBundlePoint(const SpaceForm& sf, int p, double r, Point base, std::vector<Complex> fiber);

  const Point& base() const noexcept { return base_; }
  const std::vector<Complex>& fiber() const noexcept { return fiber_; }

 private:
  Point base_;
  std::vector<Complex> fiber_;
};

/// Columns span the holomorphic tangent space of {rho = const} at (z, xi):
/// e_{z_mu} - (d_mu rho / d_{I0} rho) e_{xi_I0} for each mu, then
/// e_{xi_I} - (d_I rho / d_{I0} rho) e_{xi_I0} for I != I0, where I0
/// maximizes |d rho / d xi_I|. Throws PreconditionError for xi = 0.
CMatrix tangent_basis(const SpaceForm& sf, int p, const Point& z, std::span<const Complex> xi);

struct LeviReport {
  std::vector<double> eigenvalues;  // ascending
  Signature signature;
  std::size_t dimension = 0;        // m + |A| - 1
};

/// Levi form of S_r at (z, xi). The point is first moved to the chart center
/// by recentering_map, where the complex Hessian of rho is block diagonal:
/// -Theta(e_l, e_k, xi, xi) on the base and the identity on the fiber. Only
/// definite space forms are supported.
LeviReport levi_form(const SpaceForm& sf, int p, double r, const Point& z, std::span<const Complex> xi,
                     double zero_tol = kDefaultZeroTol);

/// Same restricted Levi form, with the complex Hessian of rho taken by
/// central finite differences at (z, xi) itself (no recentering).
LeviReport levi_form_numeric(const SpaceForm& sf, int p, double r, const Point& z, std::span<const Complex> xi,
                             double step = 1e-4, double zero_tol = 1e-6);

/// Complex Hessian quadratic form (d dbar f)(v, conj v) of a real function of
/// complex variables by central differences along the complex line x + t v.
template <class Fn>
double complex_hessian_fd(const Fn& f, std::span<const Complex> x, std::span<const Complex> v, double h = 1e-4);

struct ProbeResult {
  double lhs = 0.0;  // source-side horizontal Levi value
  double rhs = 0.0;  // target-side Levi value on the pushed-forward vector
  bool conflict = false;
  bool inconclusive = false;  // pushforward vanished
  std::vector<Complex> eta;   // horizontal direction used (recentered source coords)
  double pushforward_norm = 0.0;
};

inline constexpr double kProbeTol = 1e-12;

/// Compares the Levi forms of the unit sphere bundles of the p-th exterior
/// powers of T_src and T_tgt through the bundle map (w, v) -> (F(w), F_* v).
/// Both sides are evaluated at chart centers after recentering w and F(w).
/// When eta is omitted the horizontal direction with largest pushforward is
/// chosen among the coordinate axes and the top singular direction of JF.
/// conflict = lhs <= tol and rhs > tol.
ProbeResult obstruction_probe(const SpaceForm& src, const SpaceForm& tgt, const MapExpr& F, int p, const Point& w,
                              std::span<const Complex> xi, std::optional<std::vector<Complex>> eta = std::nullopt,
                              double tol = kProbeTol);

/// d/dt C_p(m + t dm) at t = 0, by row replacement in every minor.
CMatrix compound_derivative(const CMatrix& m, const CMatrix& dm, int p);

template <class Fn>
double complex_hessian_fd(const Fn& f, std::span<const Complex> x, std::span<const Complex> v, double h) {
  auto at = [&](Complex t) {
    std::vector<Complex> y(x.begin(), x.end());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += t * v[k];
    return f(y);
  };
  const double f0 = at(0.0);
  const Complex i(0.0, 1.0);
  const double d2 = (at(h) + at(-h) + at(i * h) + at(-i * h) - 4.0 * f0) / (h * h);
  return 0.25 * d2;
}

}  // namespace kform
