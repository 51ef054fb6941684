#include "kform/sampling.hpp"

#include <cmath>
#include <numbers>

#include "kform/error.hpp"

namespace kform {

double Sampler::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Sampler::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

Complex Sampler::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

int Sampler::uniform_int(int lo, int hi) {
  const double u = uniform();
  return lo + static_cast<int>(std::floor(u * (hi - lo + 1)));
}

std::vector<Complex> Sampler::unit_vector(std::size_t n) {
  std::vector<Complex> v(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : v) {
      x = complex_normal();
      norm += std::norm(x);
    }
  } while (norm < 1e-24);
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

Point Sampler::point_in_ball(std::size_t n, double r) {
  Point p = unit_vector(n);
  const double rho = r * std::pow(uniform(), 1.0 / (2.0 * static_cast<double>(n)));
  for (auto& x : p) x *= rho;
  return p;
}

CMatrix Sampler::gaussian_matrix(std::size_t n) {
  CMatrix m(n, n);
  for (auto& x : m.entries()) x = complex_normal();
  return m;
}

HermitianMatrix Sampler::positive_definite(std::size_t n, double shift) {
  const CMatrix a = gaussian_matrix(n);
  return HermitianMatrix(a * a.adjoint() + CMatrix::identity(n) * Complex(shift));
}

CMatrix Sampler::unitary(std::size_t n) {
  CMatrix q = gaussian_matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      Complex proj = 0.0;
      for (std::size_t r = 0; r < n; ++r) proj += std::conj(q(r, prev)) * q(r, c);
      for (std::size_t r = 0; r < n; ++r) q(r, c) -= proj * q(r, prev);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q(r, c) /= norm;
  }
  return q;
}

std::vector<Point> sample_chart_points(const SpaceForm& sf, std::size_t count, std::uint64_t seed, double radius) {
  if (radius <= 0.0) radius = default_sampling_radius(sf);
  constexpr double kMargin = 0.05;
  Sampler rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 10)) throw DomainError("sampling region misses the chart of " + sf.to_string());
    Point p = rng.point_in_ball(static_cast<std::size_t>(sf.dim()), radius);
    const double ns = sf.norm_s(p);
    if (sf.kind() == SpaceKind::Ball && ns > 1.0 - kMargin) continue;
    if (sf.kind() == SpaceKind::Projective && 1.0 + ns < kMargin) continue;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace kform
