#include "kform/umehara.hpp"

#include <cmath>

#include "kform/error.hpp"

namespace kform {

BiSeries::BiSeries(int order) : order_(order) {
  if (order < 0) throw PreconditionError("series order must be >= 0");
  c_ = CMatrix(static_cast<std::size_t>(order + 1), static_cast<std::size_t>(order + 1));
}

BiSeries::BiSeries(int order, CMatrix coeffs) : BiSeries(order) {
  if (coeffs.rows() != c_.rows() || coeffs.cols() != c_.cols())
    throw DimensionError("coefficient matrix must be (order+1) x (order+1)");
  c_ = std::move(coeffs);
}

BiSeries BiSeries::constant(int order, Complex c) { return monomial(order, 0, 0, c); }

BiSeries BiSeries::monomial(int order, int j, int k, Complex c) {
  BiSeries s(order);
  if (j < 0 || k < 0) throw IndexError("negative monomial degree");
  if (j <= order && k <= order) s(j, k) = c;
  return s;
}

BiSeries BiSeries::from_holomorphic_product(int order, std::span<const Complex> f, std::span<const Complex> g) {
  BiSeries s(order);
  for (std::size_t j = 0; j < f.size() && j <= static_cast<std::size_t>(order); ++j)
    for (std::size_t k = 0; k < g.size() && k <= static_cast<std::size_t>(order); ++k)
      s(static_cast<int>(j), static_cast<int>(k)) = f[j] * std::conj(g[k]);
  return s;
}

void BiSeries::require_same_order(const BiSeries& o) const {
  if (o.order_ != order_) throw DimensionError("series orders differ");
}

BiSeries& BiSeries::operator+=(const BiSeries& o) {
  require_same_order(o);
  c_ += o.c_;
  return *this;
}

BiSeries& BiSeries::operator-=(const BiSeries& o) {
  require_same_order(o);
  c_ -= o.c_;
  return *this;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
  a.require_same_order(b);
  const int n = a.order_;
  BiSeries out(n);
  for (int j1 = 0; j1 <= n; ++j1)
    for (int k1 = 0; k1 <= n; ++k1) {
      const Complex x = a(j1, k1);
      if (x == Complex{}) continue;
      for (int j2 = 0; j1 + j2 <= n; ++j2)
        for (int k2 = 0; k1 + k2 <= n; ++k2) out(j1 + j2, k1 + k2) += x * b(j2, k2);
    }
  return out;
}

BiSeries operator*(Complex s, BiSeries a) {
  a.c_ *= s;
  return a;
}

BiSeries BiSeries::reciprocal() const {
  const Complex c00 = (*this)(0, 0);
  if (c00 == Complex{}) throw SingularEvaluationError("reciprocal of a series with zero constant term");
  BiSeries t(order_);
  for (int j = 0; j <= order_; ++j)
    for (int k = 0; k <= order_; ++k) {
      Complex acc = (j == 0 && k == 0) ? Complex(1.0) : Complex(0.0);
      for (int a = 0; a <= j; ++a)
        for (int b = 0; b <= k; ++b) {
          if (a == 0 && b == 0) continue;
          acc -= (*this)(a, b) * t(j - a, k - b);
        }
      t(j, k) = acc / c00;
    }
  return t;
}

BiSeries BiSeries::pow(int k) const {
  if (k < 0) return reciprocal().pow(-k);
  BiSeries result = constant(order_, 1.0);
  BiSeries square = *this;
  while (k > 0) {
    if (k & 1) result = result * square;
    k >>= 1;
    if (k > 0) square = square * square;
  }
  return result;
}

BiSeries BiSeries::rotate(double theta) const {
  BiSeries out(order_);
  for (int j = 0; j <= order_; ++j)
    for (int k = 0; k <= order_; ++k) out(j, k) = (*this)(j, k) * std::polar(1.0, (j - k) * theta);
  return out;
}

Complex BiSeries::evaluate(Complex zeta) const {
  Complex sum = 0.0;
  Complex zj = 1.0;
  for (int j = 0; j <= order_; ++j) {
    Complex zk = 1.0;
    for (int k = 0; k <= order_; ++k) {
      sum += (*this)(j, k) * zj * zk;
      zk *= std::conj(zeta);
    }
    zj *= zeta;
  }
  return sum;
}

double BiSeries::hermitian_defect() const {
  double d = 0.0;
  for (int j = 0; j <= order_; ++j)
    for (int k = 0; k <= order_; ++k) d = std::max(d, std::abs((*this)(j, k) - std::conj((*this)(k, j))));
  return d;
}

namespace {

void require_same_length(const Taylor1& x, const Taylor1& y) {
  if (x.a.size() != y.a.size()) throw DimensionError("Taylor series lengths differ");
}

}  // namespace

Taylor1 operator+(const Taylor1& x, const Taylor1& y) {
  require_same_length(x, y);
  Taylor1 r = x;
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] += y.a[k];
  return r;
}

Taylor1 operator-(const Taylor1& x, const Taylor1& y) {
  require_same_length(x, y);
  Taylor1 r = x;
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] -= y.a[k];
  return r;
}

Taylor1 operator-(const Taylor1& x) {
  Taylor1 r = x;
  for (auto& c : r.a) c = -c;
  return r;
}

Taylor1 operator*(const Taylor1& x, const Taylor1& y) {
  require_same_length(x, y);
  Taylor1 r{std::vector<Complex>(x.a.size())};
  for (std::size_t i = 0; i < x.a.size(); ++i)
    for (std::size_t j = 0; i + j < x.a.size(); ++j) r.a[i + j] += x.a[i] * y.a[j];
  return r;
}

Taylor1 operator/(const Taylor1& x, const Taylor1& y) {
  require_same_length(x, y);
  Taylor1 q{std::vector<Complex>(x.a.size())};
  for (std::size_t n = 0; n < x.a.size(); ++n) {
    Complex acc = x.a[n];
    for (std::size_t k = 1; k <= n; ++k) acc -= y.a[k] * q.a[n - k];
    q.a[n] = acc / y.a[0];
  }
  return q;
}

std::vector<std::vector<Complex>> slice_taylor(const MapExpr& F, int order) {
  if (order < 0) throw PreconditionError("series order must be >= 0");
  const std::size_t len = static_cast<std::size_t>(order) + 1;
  std::vector<Taylor1> vars(static_cast<std::size_t>(F.arity()), Taylor1{std::vector<Complex>(len)});
  if (len > 1) vars[0].a[1] = 1.0;
  std::vector<std::vector<Complex>> out;
  for (const auto& comp : F.components()) {
    const Taylor1 t = comp.evaluate<Taylor1>(
        std::span<const Taylor1>(vars),
        [len](Complex c) {
          Taylor1 r{std::vector<Complex>(len)};
          r.a[0] = c;
          return r;
        },
        [](const Taylor1& t) { return !(std::abs(t.a[0]) > kSingularThreshold); });
    out.push_back(t.a);
  }
  return out;
}

BiSeries ball_slice(int p, int order) {
  return (BiSeries::constant(order, 1.0) - BiSeries::monomial(order, 1, 1)).pow(-(p + 1));
}

BiSeries proj_slice(int p, int order) {
  return (BiSeries::constant(order, 1.0) + BiSeries::monomial(order, 1, 1)).pow(-(p + 1));
}

BiSeries psi_series(int p, const MapExpr& F, int order) {
  BiSeries norm2 = BiSeries::constant(order, 1.0);
  for (const auto& f : slice_taylor(F, order)) norm2 += BiSeries::from_holomorphic_product(order, f, f);
  return norm2.pow(2 * p) * ball_slice(p, order);
}

BiSeries builtin_series(const std::string& name, int p, int order, const MapExpr* F) {
  if (p < 1) throw PreconditionError("degree p must be >= 1");
  if (name == "ball_slice") return ball_slice(p, order);
  if (name == "proj_slice") return proj_slice(p, order);
  if (name == "psi") {
    if (F == nullptr) throw PreconditionError("psi needs a map");
    return psi_series(p, *F, order);
  }
  throw PreconditionError("unknown series '" + name + "'");
}

std::size_t coeff_rank(const BiSeries& s, double tol) {
  CMatrix a = s.coeffs();
  const double threshold = tol * a.max_abs();
  if (!(a.max_abs() > 0.0)) return 0;
  const std::size_t n = a.rows();
  std::size_t rank = 0;
  for (; rank < n; ++rank) {
    std::size_t pr = rank;
    std::size_t pc = rank;
    double best = -1.0;
    for (std::size_t r = rank; r < n; ++r)
      for (std::size_t c = rank; c < n; ++c)
        if (std::abs(a(r, c)) > best) {
          best = std::abs(a(r, c));
          pr = r;
          pc = c;
        }
    if (!(best > threshold)) break;
    for (std::size_t c = 0; c < n; ++c) std::swap(a(rank, c), a(pr, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(a(r, rank), a(r, pc));
    for (std::size_t r = rank + 1; r < n; ++r) {
      const Complex f = a(r, rank) / a(rank, rank);
      for (std::size_t c = rank; c < n; ++c) a(r, c) -= f * a(rank, c);
    }
  }
  return rank;
}

std::string growth_hint(const std::vector<std::pair<int, std::size_t>>& table) {
  const std::size_t n = table.size();
  if (n >= 3 && table[n - 1].second == table[n - 2].second && table[n - 2].second == table[n - 3].second)
    return "bounded";
  return "growing";
}

RankGrowth rank_growth(const std::string& name, int p, const std::vector<int>& orders, const MapExpr* F, double tol) {
  for (std::size_t k = 1; k < orders.size(); ++k)
    if (orders[k] <= orders[k - 1]) throw PreconditionError("orders must be strictly ascending");
  return rank_growth_of([&](int n) { return builtin_series(name, p, n, F); }, orders, tol);
}

}  // namespace kform
