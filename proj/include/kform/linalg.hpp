#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace kform {

using Complex = std::complex<double>;

/// Absolute threshold below which an eigenvalue counts as zero.
inline constexpr double kDefaultZeroTol = 1e-9;

/// Strictly increasing list of 1-based indices i_1 < ... < i_p.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> indices);
  MultiIndex(std::initializer_list<int> indices) : MultiIndex(std::vector<int>(indices)) {}

  std::size_t size() const noexcept { return indices_.size(); }
  int operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<int>& indices() const noexcept { return indices_; }
  int back() const { return indices_.back(); }

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> indices_;
};

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const Complex> d);
  static CMatrix column(std::span<const Complex> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  CMatrix transpose() const;
  CMatrix conjugate() const;
  CMatrix adjoint() const;

  /// Submatrix from 1-based row and column multi-indices.
  CMatrix select(const MultiIndex& rows, const MultiIndex& cols) const;

  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& rhs);
  CMatrix& operator-=(const CMatrix& rhs);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

  std::vector<Complex> apply(std::span<const Complex> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Square Hermitian matrix. Construction replaces m by (m + m*)/2.
///
/// Throughout the library entry (j, k) of a Hermitian coefficient matrix is
/// the coefficient of dz_j ^ d(conj z_k), so the associated form evaluates as
/// sum_{j,k} h(j,k) v_j conj(v_k); see hermitian_form().
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(CMatrix m);

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> d);

  std::size_t dim() const noexcept { return m_.rows(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const CMatrix& matrix() const noexcept { return m_; }

  double trace() const;

  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) {
    return HermitianMatrix(h.m_ * Complex(s));
  }

 private:
  CMatrix m_;
};

/// sum_{j,k} m(j,k) v_j conj(w_k).
Complex sesquilinear(const CMatrix& m, std::span<const Complex> v, std::span<const Complex> w);

/// sum_{j,k} h(j,k) v_j conj(v_k); real for Hermitian h.
double hermitian_form(const HermitianMatrix& h, std::span<const Complex> v);

/// Determinant by LU with partial pivoting.
Complex det(const CMatrix& m);

/// Determinant of the submatrix on 1-based rows `row_idx` and columns `col_idx`.
Complex minor_det(const CMatrix& m, const MultiIndex& row_idx, const MultiIndex& col_idx);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  CMatrix basis;                    // unitary, column k pairs with eigenvalues[k]
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Converges when the off-diagonal Frobenius norm drops
/// below 1e-12 ||h||_F; gives up after 100 sweeps.
EigenDecomposition hermitian_eigen(const HermitianMatrix& h);

struct Signature {
  std::size_t negative = 0;
  std::size_t zero = 0;
  std::size_t positive = 0;

  std::size_t total() const noexcept { return negative + zero + positive; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

Signature signature(const HermitianMatrix& h, double tol = kDefaultZeroTol);
Signature signature_of(std::span<const double> eigenvalues, double tol = kDefaultZeroTol);

/// Eigenvalues of g^{-1/2} h g^{-1/2}, ascending. g must be positive definite.
std::vector<double> generalized_eigenvalues(const HermitianMatrix& h, const HermitianMatrix& g);

}  // namespace kform
