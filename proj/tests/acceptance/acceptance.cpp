// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kform/error.hpp"
#include "kform/levi.hpp"
#include "kform/pp_forms.hpp"
#include "kform/rigidity.hpp"
#include "kform/sampling.hpp"
#include "kform/umehara.hpp"
#include "kform/verify.hpp"
#include "oracles.hpp"

using namespace kform;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
};

std::vector<double> subset_products(const std::vector<double>& l, int p) {
  std::vector<double> out;
  const IndexBasis basis(static_cast<int>(l.size()), p);
  for (const MultiIndex& I : basis.members()) {
    double prod = 1.0;
    for (int i : I.indices()) prod *= l[static_cast<std::size_t>(i - 1)];
    out.push_back(prod);
  }
  return out;
}

Outcome eigenvalue_rigidity() {
  Outcome o;
  Sampler rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = rng.uniform_int(2, 6), p = rng.uniform_int(1, m - 1);
    const double lambda = std::exp(rng.uniform(-2.0, 2.0));
    const double root = std::pow(lambda, 1.0 / p);
    const HermitianMatrix g = rng.positive_definite(static_cast<std::size_t>(m));
    const CMatrix u = rng.unitary(static_cast<std::size_t>(m));
    const HermitianMatrix gu(u.adjoint() * g.matrix() * u);
    const auto f = conclude_isometry_factor(eigen_profile(root * gu, gu, p, lambda));
    o.require(f && std::abs(*f - root) <= 1e-8 * root, "factor not recovered");
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = rng.uniform_int(2, 6), p = rng.uniform_int(1, m - 1);
    std::vector<double> l(static_cast<std::size_t>(m));
    for (auto& x : l) x = rng.uniform(0.2, 3.0);
    std::sort(l.begin(), l.end());
    if (l.back() - l.front() < 1e-6) l.back() += 0.5;
    o.require(!eigen_products_check({l, p, subset_products(l, p).front()}, 1e-8), "non-constant profile passed");
  }
  return o;
}

Outcome flat_example() {
  Outcome o;
  const std::vector<std::string> comps = {"z1 + 1/(1-z2)", "z2", "0", "0"};
  const MapExpr F = MapExpr::parse(comps, 2);
  const SpaceForm c2 = SpaceForm::euclidean(2), c4 = SpaceForm::euclidean(4);
  const auto pts = sample_chart_points(c2, 100, 42, 0.5);
  for (const Point& w : pts) {
    const PPFormMatrix th = pullback_pp(F, c2, c4, 2, w);
    o.require(th.entries.dim() == 1 && std::abs(th.entries(0, 0) - 1.0) <= 1e-12, "top-degree coefficient != 1");
  }
  const PullbackResult one = proportionality_test(F, c2, c4, 1, pts);
  o.require(!one.pass && one.maxResidual > 1e-2, "degree one unexpectedly proportional");
  return o;
}

Outcome veronese() {
  Outcome o;
  const std::vector<std::string> comps = {"sqrt(2)*z", "z^2"};
  const SpaceForm p1 = SpaceForm::projective(1), p2 = SpaceForm::projective(2);
  const PullbackResult r = proportionality_test(MapExpr::parse(comps, 1), p1, p2, 1, sample_chart_points(p1, 50, 42));
  o.require(r.pass, "proportionality failed");
  o.require(std::abs(r.lambdaHat - 2.0) <= 1e-10, "lambdaHat != 2");
  o.require(r.lambdaHat >= 1.0, "lambda < 1");
  return o;
}

Outcome ricci_identities() {
  Outcome o;
  for (int n = 1; n <= 3; ++n)
    for (SpaceKind k : {SpaceKind::Projective, SpaceKind::Ball}) {
      const SpaceForm sf(k, n);
      const double c = k == SpaceKind::Projective ? n + 1.0 : -(n + 1.0);
      for (const Point& z : sample_chart_points(sf, 200, 42)) {
        const CMatrix diff = ricci(sf, z).matrix() - metric(sf, z).matrix() * Complex(c);
        o.require(diff.max_abs() <= 1e-9, "ricci != c g for " + sf.to_string());
      }
      if (k == SpaceKind::Ball) {
        auto logdet = [&](const std::vector<Complex>& w) { return std::log(det(metric(sf, w).matrix()).real()); };
        for (const Point& z : sample_chart_points(sf, 5, 43, 0.6)) {
          const CMatrix fd = oracle::complex_hessian(logdet, z, 1e-4) * Complex(-1.0);
          o.require(oracle::max_abs_diff(fd, ricci(sf, z).matrix()) <= 1e-5, "log det cross-check");
        }
      }
    }
  return o;
}

Outcome levi_signatures() {
  Outcome o;
  auto run = [&](const SpaceForm& sf, int p, std::function<bool(const LeviReport&)> ok, const std::string& label) {
    Sampler rng(77);
    const std::size_t na = binomial(sf.dim(), p);
    for (const Point& z : sample_chart_points(sf, 20, 42)) {
      const LeviReport r = levi_form(sf, p, 1.0, z, rng.unit_vector(na));
      bool nondeg = true;
      for (double e : r.eigenvalues) nondeg = nondeg && std::abs(e) > 1e-8;
      o.require(ok(r) && nondeg, label);
    }
  };
  for (int m = 1; m <= 3; ++m)
    run(SpaceForm::projective(m), m, [m](const LeviReport& r) {
      return r.signature == Signature{static_cast<std::size_t>(m), 0, 0};
    }, "P^m top degree");
  run(SpaceForm::projective(2), 1, [](const LeviReport& r) {
    return r.signature == Signature{2, 0, 1} && 2 * r.signature.positive <= 2 + 2 - 1;
  }, "P^2 p=1");
  run(SpaceForm::projective(3), 2, [](const LeviReport& r) {
    return r.signature == Signature{3, 0, 2} && 2 * r.signature.positive <= 3 + 3 - 1;
  }, "P^3 p=2");
  for (int n = 1; n <= 3; ++n)
    for (int p = 1; p <= std::min(n, 2); ++p)
      run(SpaceForm::ball(n), p, [](const LeviReport& r) { return r.signature.positive == r.dimension; }, "ball");
  return o;
}

Outcome obstruction() {
  Outcome o;
  struct Case {
    SpaceForm src, tgt;
    std::vector<std::vector<std::string>> maps;
  };
  const std::vector<Case> cases = {
      {SpaceForm::euclidean(2),
       SpaceForm::ball(3),
       {{"0.3*z1", "0.3*z2", "0"},
        {"0.2*z1 + 0.1*z2^2", "0.25*z2", "0.1*z1*z2"},
        {"0.3*z1/(3 + z2)", "0.1*z1^2", "0.2*z2"}}},
      {SpaceForm::projective(1),
       SpaceForm::ball(2),
       {{"0.4*z/(3 + z)", "0"}, {"0.3*z/(3 + z)", "0.1*z^2/(3 + z)^2"}, {"0.2*z/(2 + z^2)", "0.2/(2 + z^2)"}}},
  };
  Sampler rng(42);
  for (const Case& c : cases)
    for (const auto& comps : c.maps) {
      const MapExpr F = MapExpr::parse(comps, c.src.dim());
      const auto pts = sample_chart_points(c.src, 20, rng.uniform_int(0, 1 << 20), 0.9);
      for (const Point& w : pts) {
        const int p = rng.uniform_int(1, c.src.dim());
        const ProbeResult r = obstruction_probe(c.src, c.tgt, F, p, w, rng.unit_vector(binomial(c.src.dim(), p)));
        if (!r.inconclusive) o.require(r.conflict, "missing conflict " + c.src.to_string());
      }
    }
  const std::vector<std::string> geodesic = {"z", "0"};
  for (const Point& w : sample_chart_points(SpaceForm::ball(1), 20, 44)) {
    const ProbeResult r = obstruction_probe(SpaceForm::ball(1), SpaceForm::ball(2), MapExpr::parse(geodesic, 1), 1, w,
                                            std::vector<Complex>{1.0});
    o.require(!r.conflict, "control conflicted");
  }
  return o;
}

Outcome umehara_ranks() {
  Outcome o;
  for (int p = 1; p <= 3; ++p)
    for (int n = 0; n <= 10; ++n)
      o.require(coeff_rank(ball_slice(p, n)) == static_cast<std::size_t>(n + 1), "ball_slice rank");
  Sampler rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> f(static_cast<std::size_t>(rng.uniform_int(1, 5))), g(static_cast<std::size_t>(rng.uniform_int(1, 5)));
    for (auto& x : f) x = rng.complex_normal();
    for (auto& x : g) x = rng.complex_normal();
    const BiSeries s = BiSeries::from_holomorphic_product(8, f, g) + BiSeries::from_holomorphic_product(8, g, f);
    o.require(coeff_rank(s) <= 2, "f conj g + g conj f rank > 2");
  }
  const std::vector<std::string> comps = {"z"};
  const MapExpr F = MapExpr::parse(comps, 1);
  const RankGrowth psi = rank_growth("psi", 1, {2, 4, 6, 8, 10}, &F);
  for (std::size_t k = 1; k < psi.table.size(); ++k)
    o.require(psi.table[k].second > psi.table[k - 1].second, "psi rank not strictly increasing");
  for (int p = 1; p <= 3; ++p) {
    const MultiIndex I = index_basis(3, p)[0];
    for (int t = 0; t < 20; ++t) {
      const Complex zeta = rng.point_in_ball(1, 0.5)[0];
      const Point z = {zeta, 0.0, 0.0};
      const double x = std::norm(zeta);
      const double phi = minor_det(metric(SpaceForm::ball(3), z).matrix(), I, I).real();
      const double ups = minor_det(metric(SpaceForm::projective(3), z).matrix(), I, I).real();
      o.require(std::abs(phi - std::pow(1.0 - x, -(p + 1))) <= 1e-10, "ball slice identity");
      o.require(std::abs(ups - std::pow(1.0 + x, -(p + 1))) <= 1e-10, "projective slice identity");
    }
  }
  return o;
}

Outcome indefinite() {
  Outcome o;
  for (int n = 1; n <= 4; ++n)
    for (int s = 0; s <= n; ++s) {
      const SpaceForm flat(SpaceKind::Euclidean, n, s);
      Sampler rng(static_cast<std::uint64_t>(10 * n + s));
      const HermitianMatrix g = metric(flat, rng.point_in_ball(static_cast<std::size_t>(n), 1.0));
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          o.require(g(j, k) == Complex(j == k ? (j < s ? 1.0 : -1.0) : 0.0), "flat pattern");
      for (SpaceKind kind : {SpaceKind::Ball, SpaceKind::Projective}) {
        const SpaceForm sf(kind, n, s);
        const HermitianMatrix g0 = metric(sf, Point(static_cast<std::size_t>(n)));
        const Signature sig = signature(g0);
        o.require(sig.positive == static_cast<std::size_t>(s) && sig.negative == static_cast<std::size_t>(n - s),
                  "center signature " + sf.to_string());
        for (const Point& z : sample_chart_points(sf, 100 / (4 * 5) + 1, 42)) {
          const HermitianMatrix gz = metric(sf, z);
          o.require(oracle::max_abs_diff(gz.matrix(), gz.matrix().adjoint()) <= 1e-12, "not Hermitian");
          const int p = 1 + (n > 1 ? 1 : 0);
          const PPFormMatrix w = wedge_power_coeffs(gz, p);
          for (std::size_t i = 0; i < w.basis.size(); ++i)
            for (std::size_t j = 0; j < w.basis.size(); ++j)
              o.require(std::abs(w.entries(i, j) - oracle::minor_by_cofactor(gz.matrix(), w.basis[i].indices(),
                                                                             w.basis[j].indices())) <= 1e-10,
                        "wedge minors");
        }
      }
    }
  return o;
}

Outcome relatives() {
  Outcome o;
  const std::vector<std::string> ver = {"sqrt(2)*z", "z^2"};
  const std::vector<std::string> embed = {"z", "0"};
  const auto pts = sample_chart_points(SpaceForm::ball(1), 50, 42);
  const PullbackResult a = relatives_test(MapExpr::parse(ver, 1), MapExpr::identity(1), SpaceForm::projective(2),
                                          SpaceForm::projective(1), 1, 1, pts);
  o.require(a.pass && std::abs(a.lambdaHat - 2.0) <= 1e-10, "Veronese pair");
  const PullbackResult b = relatives_test(MapExpr::parse(embed, 1), MapExpr::identity(1), SpaceForm::ball(2),
                                          SpaceForm::projective(1), 1, 1, pts);
  o.require(!b.pass && b.ratioSpread > 1e-2, "ball vs projective pair");
  return o;
}

Outcome determinism() {
  Outcome o;
  const verify::Report a = verify::run_reference_suite(42);
  const verify::Report b = verify::run_reference_suite(42);
  o.require(verify::report_to_json(a).dump() == verify::report_to_json(b).dump(), "reports differ");
  o.require(a.overall(), "suite overall FAIL");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"eigenvalue-product rigidity", eigenvalue_rigidity},
      {"top-degree preserver that is not an isometry", flat_example},
      {"Veronese isometry factor", veronese},
      {"Ricci identities", ricci_identities},
      {"Levi signatures", levi_signatures},
      {"obstruction probe", obstruction},
      {"Umehara ranks", umehara_ranks},
      {"indefinite metrics", indefinite},
      {"relatives test", relatives},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2zu %s: %s%s%s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.note.empty() ? "" : " -- ", o.note.c_str());
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
