#pragma once

#include <span>
#include <string>
#include <string_view>

#include "kform/expr.hpp"
#include "kform/linalg.hpp"

namespace kform {

enum class SpaceKind { Euclidean, Ball, Projective };

/// "euclidean" | "ball" | "projective".
std::string kind_name(SpaceKind kind);
SpaceKind parse_kind(std::string_view name);

/// Simply connected complex space form C^n_s, B^n_s or P^n_s, normalized to
/// holomorphic sectional curvature 0, -2, +2. The first `sig` coordinates
/// carry a plus sign in ||w||_s^2, the rest a minus sign; sig == dim gives
/// the definite forms. Projective space is always used in the chart U_0.
class SpaceForm {
 public:
  SpaceForm(SpaceKind kind, int dim, int sig);
  SpaceForm(SpaceKind kind, int dim) : SpaceForm(kind, dim, dim) {}

  static SpaceForm euclidean(int n) { return {SpaceKind::Euclidean, n}; }
  static SpaceForm ball(int n) { return {SpaceKind::Ball, n}; }
  static SpaceForm projective(int n) { return {SpaceKind::Projective, n}; }

  SpaceKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  int sig() const noexcept { return sig_; }
  bool definite() const noexcept { return sig_ == dim_; }

  /// +1 for the first sig coordinates (0-based j < sig), -1 afterwards.
  double epsilon(std::size_t j) const noexcept { return static_cast<int>(j) < sig_ ? 1.0 : -1.0; }

  /// ||w||_s^2.
  double norm_s(std::span<const Complex> w) const;

  /// Holomorphic sectional curvature constant c in {0, -2, +2}.
  double curvature_constant() const noexcept;
  /// Ricci = ricci_constant() * metric: 0, -(n+1), n+1.
  double ricci_constant() const noexcept;

  /// Whether w lies in the chart: anywhere for C^n, ||w||_s^2 < 1 for the
  /// ball, 1 + ||w||_s^2 > 0 for projective space.
  bool in_chart(std::span<const Complex> w) const;

  /// e.g. "ball(2)" or "projective(3,1)".
  std::string to_string() const;

  friend bool operator==(const SpaceForm&, const SpaceForm&) = default;

 private:
  SpaceKind kind_;
  int dim_;
  int sig_;
};

/// A point validated against a space form's chart on construction.
class ChartPoint {
 public:
  ChartPoint(const SpaceForm& sf, Point coords);

  const Point& coords() const noexcept { return coords_; }
  operator const Point&() const noexcept { return coords_; }

 private:
  Point coords_;
};

/// Throws DimensionError or DomainError unless z is a chart point of sf.
void require_chart_point(const SpaceForm& sf, std::span<const Complex> z);

HermitianMatrix metric(const SpaceForm& sf, const Point& z);

/// Holomorphic derivative d g_{j k} / d z_mu (mu 0-based) as a plain matrix.
CMatrix metric_derivative(const SpaceForm& sf, const Point& z, std::size_t mu);

HermitianMatrix ricci(const SpaceForm& sf, const Point& z);

/// Theta(a, conj b, u, conj v) = (c/2) [g(a,b) g(u,v) + g(a,v) g(u,b)],
/// where g(x,y) = sum g_{jk} x_j conj(y_k). Griffiths-positive bundles give
/// positive values; P^n at the center has Theta(e1,e1,e1,e1) = 2.
Complex curvature(const SpaceForm& sf, const Point& z, std::span<const Complex> a, std::span<const Complex> b,
                  std::span<const Complex> u, std::span<const Complex> v);

/// Theta(eta, conj eta, u, conj u).
double curvature(const SpaceForm& sf, const Point& z, std::span<const Complex> eta, std::span<const Complex> u);

/// Curvature of the induced metric on the p-th exterior power paired with
/// the frame elements s_I, s_J:
///   Theta(a, conj b, s_I, conj s_J) = sum_k det M_k,
/// where M_k is the p x p matrix g_{i_s j_t} with row k replaced by
/// Theta(a, conj b, e_{i_k}, e_{j_t}). For I = J at the center of P^m this is
/// the familiar sum over k of Theta_T(a, b, e_{i_k}, e_{i_k}).
Complex wedge_curvature(const SpaceForm& sf, const Point& z, std::span<const Complex> a, std::span<const Complex> b,
                        const MultiIndex& I, const MultiIndex& J);
Complex wedge_curvature(const SpaceForm& sf, const Point& z, std::span<const Complex> eta, const MultiIndex& I,
                        const MultiIndex& J);

/// Holomorphic isometry of a definite space form taking a to the origin:
/// translation for C^n, the Moebius involution for B^n, a Householder
/// unitary read in the chart U_0 for P^n.
MapExpr recentering_map(const SpaceForm& sf, const Point& a);

/// Inverse of recentering_map (takes the origin to a).
MapExpr recentering_inverse(const SpaceForm& sf, const Point& a);

/// Radius of the default sampling region: 0.9 for the ball, 2 otherwise.
double default_sampling_radius(const SpaceForm& sf);

}  // namespace kform
