#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kform/space_form.hpp"

namespace kform {

/// Seeded generator used by every sampled check. Draws come from
/// std::mt19937_64; uniforms use the top 53 bits, normals use Box-Muller.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Complex complex_normal();
  int uniform_int(int lo, int hi);  // inclusive

  /// Unit vector uniform on the sphere of C^n.
  std::vector<Complex> unit_vector(std::size_t n);

  /// Uniform in the Euclidean ball of radius r in C^n.
  Point point_in_ball(std::size_t n, double r);

  /// Random square matrix with iid standard complex normal entries.
  CMatrix gaussian_matrix(std::size_t n);

  /// Random Hermitian positive definite matrix A A* + shift I.
  HermitianMatrix positive_definite(std::size_t n, double shift = 0.5);

  /// Haar-ish unitary from Gram-Schmidt of a Gaussian matrix.
  CMatrix unitary(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// `count` chart points uniform in the ball of `radius` around the origin
/// (radius <= 0 selects default_sampling_radius). Draws that leave the chart,
/// or come within 0.05 of its boundary in ||w||_s^2, are rejected.
std::vector<Point> sample_chart_points(const SpaceForm& sf, std::size_t count, std::uint64_t seed,
                                       double radius = 0.0);

}  // namespace kform
