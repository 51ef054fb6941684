#include "kform/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kform/error.hpp"

namespace kform {

MultiIndex::MultiIndex(std::vector<int> indices) : indices_(std::move(indices)) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 1) throw IndexError("multi-index entries must be >= 1");
    if (k > 0 && indices_[k] <= indices_[k - 1])
      throw IndexError("multi-index must be strictly increasing: " + to_string());
  }
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(indices_[k]);
  }
  return s + ")";
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) throw DimensionError("entry count does not match rows x cols");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::column(std::span<const Complex> v) {
  return CMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

CMatrix CMatrix::conjugate() const {
  CMatrix c = *this;
  for (auto& x : c.data_) x = std::conj(x);
  return c;
}

CMatrix CMatrix::adjoint() const { return transpose().conjugate(); }

CMatrix CMatrix::select(const MultiIndex& rows, const MultiIndex& cols) const {
  if ((rows.size() && static_cast<std::size_t>(rows.back()) > rows_) ||
      (cols.size() && static_cast<std::size_t>(cols.back()) > cols_))
    throw IndexError("multi-index out of range for " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                     " matrix");
  CMatrix s(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) s(a, b) = (*this)(rows[a] - 1, cols[b] - 1);
  return s;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix sum shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionError("matrix difference shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  CMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<Complex> CMatrix::apply(std::span<const Complex> v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
  std::vector<Complex> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

HermitianMatrix::HermitianMatrix(CMatrix m) {
  if (!m.square()) throw DimensionError("Hermitian matrix must be square");
  if (!m.all_finite()) throw DomainError("Hermitian matrix has non-finite entries");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  m_ = std::move(m);
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) { return HermitianMatrix(CMatrix::identity(n)); }

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(std::move(m));
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i).real();
  return t;
}

Complex sesquilinear(const CMatrix& m, std::span<const Complex> v, std::span<const Complex> w) {
  if (v.size() != m.rows() || w.size() != m.cols()) throw DimensionError("form/vector size mismatch");
  Complex s{};
  for (std::size_t j = 0; j < m.rows(); ++j)
    for (std::size_t k = 0; k < m.cols(); ++k) s += m(j, k) * v[j] * std::conj(w[k]);
  return s;
}

double hermitian_form(const HermitianMatrix& h, std::span<const Complex> v) {
  return sesquilinear(h.matrix(), v, v).real();
}

Complex det(const CMatrix& m) {
  if (!m.square()) throw DimensionError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1.0;
  CMatrix a = m;
  Complex d = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      d = -d;
    }
    d *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) / a(k, k);
      if (f == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

Complex minor_det(const CMatrix& m, const MultiIndex& row_idx, const MultiIndex& col_idx) {
  if (row_idx.size() != col_idx.size()) throw IndexError("minor needs equally many rows and columns");
  return det(m.select(row_idx, col_idx));
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// A <- G* A G and V <- V G for the unitary G acting on coordinates p, q that
// annihilates A(p, q).
void jacobi_rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  const Complex phase = apq / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex gpp = c;
  const Complex gpq = s;
  const Complex gqp = -s * std::conj(phase);
  const Complex gqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

}  // namespace

EigenDecomposition hermitian_eigen(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  if (n == 0) throw DimensionError("eigen-decomposition of an empty matrix");
  constexpr int kMaxSweeps = 100;
  constexpr double kRelTol = 1e-12;

  CMatrix a = h.matrix();
  CMatrix v = CMatrix::identity(n);
  const double scale = a.frobenius_norm();
  const double threshold = kRelTol * scale;

  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweep == kMaxSweeps) throw ConvergenceError("Jacobi eigensolver did not converge in 100 sweeps");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > 0.0) jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.basis = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.basis(i, k) = v(i, order[k]);
  }
  return out;
}

Signature signature_of(std::span<const double> eigenvalues, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("signature tolerance must be positive");
  Signature s;
  for (double x : eigenvalues) {
    if (std::abs(x) <= tol)
      ++s.zero;
    else if (x < 0)
      ++s.negative;
    else
      ++s.positive;
  }
  return s;
}

Signature signature(const HermitianMatrix& h, double tol) {
  return signature_of(hermitian_eigen(h).eigenvalues, tol);
}

std::vector<double> generalized_eigenvalues(const HermitianMatrix& h, const HermitianMatrix& g) {
  if (h.dim() != g.dim()) throw DimensionError("generalized eigenproblem dimension mismatch");
  const auto eg = hermitian_eigen(g);
  if (eg.eigenvalues.front() <= 1e-10) throw DefinitenessError("base form is not positive definite");

  const std::size_t n = g.dim();
  CMatrix inv_sqrt(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k)
        s += eg.basis(i, k) * std::conj(eg.basis(j, k)) / std::sqrt(eg.eigenvalues[k]);
      inv_sqrt(i, j) = s;
    }
  return hermitian_eigen(HermitianMatrix(inv_sqrt * h.matrix() * inv_sqrt)).eigenvalues;
}

}  // namespace kform
