#include <algorithm>
#include <cmath>
#include <functional>

#include "check_runner.hpp"
#include "kform/levi.hpp"
#include "kform/pp_forms.hpp"
#include "kform/rigidity.hpp"
#include "kform/sampling.hpp"
#include "kform/umehara.hpp"
#include "kform/verify.hpp"

namespace kform::verify {

namespace {

MapExpr map_of(std::initializer_list<const char*> comps, int arity) {
  std::vector<std::string> s(comps.begin(), comps.end());
  return MapExpr::parse(s, arity);
}

// Complex Hessian matrix d_j dbar_k f by central differences and polarization.
CMatrix hessian_fd(const std::function<double(const std::vector<Complex>&)>& f, const Point& x, double h) {
  const std::size_t n = x.size();
  CMatrix out(n, n);
  const Complex phases[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      Complex b = 0.0;
      for (const Complex ph : phases) {
        std::vector<Complex> v(n);
        v[j] += 1.0;
        v[k] += ph;
        b += ph * complex_hessian_fd(f, std::span<const Complex>(x), std::span<const Complex>(v), h);
      }
      out(j, k) = 0.25 * b;
    }
  return out;
}

// Leibniz expansion, independent of the LU determinant.
Complex leibniz_det(const CMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) perm[k] = k;
  Complex total = 0.0;
  do {
    Complex term = 1.0;
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a) {
      term *= m(a, perm[a]);
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inversions;
    }
    total += (inversions % 2 ? -1.0 : 1.0) * term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

void rigidity_checks(Runner& run, std::uint64_t seed) {
  run.check("rigidity.recover_factor", std::nullopt, [&](CheckRecord& rec) {
    Sampler rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int m = rng.uniform_int(2, 6);
      const int p = rng.uniform_int(1, m - 1);
      const double lambda = std::exp(rng.uniform(-2.0, 2.0));
      const double root = std::pow(lambda, 1.0 / p);
      const HermitianMatrix g = rng.positive_definite(static_cast<std::size_t>(m));
      const EigenDecomposition eg = hermitian_eigen(g);
      CMatrix sq(eg.basis.rows(), eg.basis.cols());
      for (std::size_t k = 0; k < eg.eigenvalues.size(); ++k) sq(k, k) = std::sqrt(eg.eigenvalues[k]);
      const CMatrix half = eg.basis * sq * eg.basis.adjoint();
      const CMatrix u = rng.unitary(static_cast<std::size_t>(m));
      const CMatrix h = half * u * (CMatrix::identity(static_cast<std::size_t>(m)) * Complex(root)) * u.adjoint() * half;
      const auto f = conclude_isometry_factor(eigen_profile(HermitianMatrix(h), g, p, lambda));
      worst = std::max(worst, f ? std::abs(*f - root) / root : INFINITY);
    }
    rec.observed = worst < 1e-8;
    rec.residual = worst;
    rec.details["trials"] = 1000;
  });
  run.check("rigidity.nonconstant_rejected", std::nullopt, [&](CheckRecord& rec) {
    Sampler rng(seed + 1);
    int rejected = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int m = rng.uniform_int(2, 6);
      const int p = rng.uniform_int(1, m - 1);
      std::vector<double> l;
      do {
        l.clear();
        for (int k = 0; k < m; ++k) l.push_back(rng.uniform(0.5, 2.0));
      } while (*std::max_element(l.begin(), l.end()) - *std::min_element(l.begin(), l.end()) < 1e-3);
      std::sort(l.begin(), l.end());
      double lambda = 1.0;
      for (int k = 0; k < p; ++k) lambda *= l[k];
      if (!eigen_products_check({l, p, lambda}, 1e-9)) ++rejected;
    }
    rec.observed = rejected == 1000;
    rec.details["rejected"] = rejected;
  });
}

void flat_example_checks(Runner& run, std::uint64_t seed) {
  const SpaceForm c2 = SpaceForm::euclidean(2);
  const SpaceForm c4 = SpaceForm::euclidean(4);
  const MapExpr F = map_of({"z1 + 1/(1-z2)", "z2", "0", "0"}, 2);
  const auto points = sample_chart_points(c2, 100, seed, 0.5);
  run.check("flat_example.top_degree", std::nullopt, [&](CheckRecord& rec) {
    double worst = 0.0;
    for (const auto& w : points) worst = std::max(worst, std::abs(pullback_pp(F, c2, c4, 2, w).entries(0, 0) - 1.0));
    rec.observed = worst < 1e-12;
    rec.residual = worst;
  });
  run.check("flat_example.degree1_fails", std::nullopt, [&](CheckRecord& rec) {
    const PullbackResult r = proportionality_test(F, c2, c4, 1, points);
    rec.observed = !r.pass && r.maxResidual > 1e-2;
    rec.lambdaHat = r.lambdaHat;
    rec.residual = r.maxResidual;
  });
}

void veronese_checks(Runner& run, std::uint64_t seed) {
  run.check("veronese.isometry", std::nullopt, [&](CheckRecord& rec) {
    const MapExpr F = map_of({"sqrt(2)*z", "z^2"}, 1);
    const auto points = sample_chart_points(SpaceForm::projective(1), 50, seed);
    const PullbackResult r = proportionality_test(F, SpaceForm::projective(1), SpaceForm::projective(2), 1, points);
    rec.observed = r.pass && std::abs(r.lambdaHat - 2.0) < 1e-10 && r.lambdaHat >= 1.0;
    rec.lambdaHat = r.lambdaHat;
    rec.residual = r.maxResidual;
  });
}

void ricci_checks(Runner& run, std::uint64_t seed) {
  auto identity_check = [&](const std::string& name, SpaceKind kind, double sign) {
    run.check(name, std::nullopt, [&](CheckRecord& rec) {
      double worst = 0.0;
      for (int n = 1; n <= 3; ++n) {
        const SpaceForm sf(kind, n);
        for (const auto& z : sample_chart_points(sf, 200, seed + n)) {
          const CMatrix d = ricci(sf, z).matrix() - metric(sf, z).matrix() * Complex(sign * (n + 1));
          worst = std::max(worst, d.max_abs());
        }
      }
      rec.observed = worst < 1e-9;
      rec.residual = worst;
    });
  };
  identity_check("ricci.projective", SpaceKind::Projective, 1.0);
  identity_check("ricci.ball", SpaceKind::Ball, -1.0);
  run.check("ricci.log_det_fd", std::nullopt, [&](CheckRecord& rec) {
    double worst = 0.0;
    for (SpaceKind kind : {SpaceKind::Ball, SpaceKind::Projective, SpaceKind::Euclidean})
      for (int n = 1; n <= 3; ++n) {
        const SpaceForm sf(kind, n);
        auto logdet = [&](const std::vector<Complex>& z) { return std::log(std::abs(det(metric(sf, z).matrix()))); };
        for (const auto& z : sample_chart_points(sf, 5, seed + 10 + n, 0.5 * default_sampling_radius(sf))) {
          const CMatrix d = hessian_fd(logdet, z, 1e-4) * Complex(-1.0) - ricci(sf, z).matrix();
          worst = std::max(worst, d.max_abs());
        }
      }
    rec.observed = worst < 1e-5;
    rec.residual = worst;
  });
}

void levi_checks(Runner& run, std::uint64_t seed) {
  auto signature_check = [&](const std::string& name, const SpaceForm& sf, int p, Signature expect,
                             bool check_bound) {
    run.check(name, std::nullopt, [&](CheckRecord& rec) {
      Sampler rng(seed + static_cast<std::uint64_t>(100 * sf.dim() + p));
      const std::size_t na = binomial(sf.dim(), p);
      bool ok = true;
      double min_abs = INFINITY;
      for (const auto& z : sample_chart_points(sf, 20, seed + static_cast<std::uint64_t>(sf.dim()))) {
        const LeviReport r = levi_form(sf, p, 1.0, z, rng.unit_vector(na));
        ok = ok && r.signature == expect;
        for (double e : r.eigenvalues) min_abs = std::min(min_abs, std::abs(e));
      }
      if (check_bound) ok = ok && 2.0 * static_cast<double>(expect.positive) <= static_cast<double>(sf.dim() + na) - 1.0;
      rec.observed = ok && min_abs > 1e-8;
      rec.signature = expect;
      rec.details["space"] = sf.to_string();
      rec.details["p"] = p;
      rec.details["minAbsEigenvalue"] = min_abs;
    });
  };
  for (int m = 1; m <= 3; ++m)
    signature_check("levi.projective" + std::to_string(m) + "_top", SpaceForm::projective(m), m,
                    {static_cast<std::size_t>(m), 0, 0}, false);
  signature_check("levi.projective2_p1", SpaceForm::projective(2), 1, {2, 0, 1}, true);
  signature_check("levi.projective3_p2", SpaceForm::projective(3), 2, {3, 0, 2}, true);
  for (int n = 1; n <= 3; ++n)
    for (int p = 1; p <= std::min(n, 2); ++p) {
      const std::size_t dim = static_cast<std::size_t>(n) + binomial(n, p) - 1;
      signature_check("levi.ball" + std::to_string(n) + "_p" + std::to_string(p), SpaceForm::ball(n), p,
                      {0, 0, dim}, false);
    }
}

void probe_checks(Runner& run, std::uint64_t seed) {
  struct Family {
    std::string name;
    SpaceForm src;
    SpaceForm tgt;
    std::vector<MapExpr> maps;
    bool expect_conflict;
  };
  const std::vector<Family> families = {
      {"probe.euclidean_to_ball", SpaceForm::euclidean(2), SpaceForm::ball(3),
       {map_of({"0.3*z1", "0.3*z2", "0"}, 2), map_of({"0.2*z1 + 0.1*z2^2", "0.25*z2", "0.1*z1*z2"}, 2),
        map_of({"0.3*z1/(2 - z2)", "0.1*z1^2", "0.2*z2"}, 2)},
       true},
      {"probe.projective_to_ball", SpaceForm::projective(1), SpaceForm::ball(2),
       {map_of({"0.3*z", "0.2*z^2"}, 1), map_of({"0.4*z/(2 + z)", "0.1*z"}, 1), map_of({"0.2*z + 0.1", "0.15*z^3"}, 1)},
       true},
      {"probe.ball_control", SpaceForm::ball(1), SpaceForm::ball(2), {map_of({"z", "0"}, 1)}, false},
  };
  for (const auto& fam : families) {
    run.check(fam.name, std::nullopt, [&](CheckRecord& rec) {
      Sampler rng(seed + 7);
      int conclusive = 0;
      int conflicts = 0;
      double max_lhs = -INFINITY;
      double min_rhs = INFINITY;
      for (const auto& F : fam.maps)
        for (int probe = 0; probe < 20; ++probe) {
          const Point w = rng.point_in_ball(static_cast<std::size_t>(fam.src.dim()), 0.9);
          const int p = fam.src.dim() == 1 ? 1 : rng.uniform_int(1, fam.src.dim());
          const auto xi = rng.unit_vector(binomial(fam.src.dim(), p));
          const ProbeResult r = obstruction_probe(fam.src, fam.tgt, F, p, w, xi);
          if (r.inconclusive) continue;
          ++conclusive;
          conflicts += r.conflict ? 1 : 0;
          max_lhs = std::max(max_lhs, r.lhs);
          min_rhs = std::min(min_rhs, r.rhs);
        }
      rec.observed = conclusive > 0 && (fam.expect_conflict ? conflicts == conclusive : conflicts == 0);
      rec.details["conclusive"] = conclusive;
      rec.details["conflicts"] = conflicts;
      rec.details["maxLhs"] = max_lhs;
      rec.details["minRhs"] = min_rhs;
    });
  }
}

void umehara_checks(Runner& run, std::uint64_t seed) {
  run.check("umehara.ball_slice_rank", std::nullopt, [&](CheckRecord& rec) {
    bool ok = true;
    for (int p = 1; p <= 3; ++p)
      for (int n = 0; n <= 10; ++n) ok = ok && coeff_rank(ball_slice(p, n)) == static_cast<std::size_t>(n + 1);
    rec.observed = ok;
  });
  run.check("umehara.lambda_rank_bound", std::nullopt, [&](CheckRecord& rec) {
    Sampler rng(seed + 3);
    std::size_t worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int order = 8;
      std::vector<Complex> f(static_cast<std::size_t>(rng.uniform_int(1, 6)));
      std::vector<Complex> g(static_cast<std::size_t>(rng.uniform_int(1, 6)));
      for (auto& c : f) c = rng.complex_normal();
      for (auto& c : g) c = rng.complex_normal();
      const BiSeries s =
          BiSeries::from_holomorphic_product(order, f, g) + BiSeries::from_holomorphic_product(order, g, f);
      worst = std::max(worst, coeff_rank(s));
    }
    rec.observed = worst <= 2;
    rec.details["maxRank"] = worst;
  });
  run.check("umehara.psi_growth", std::nullopt, [&](CheckRecord& rec) {
    const MapExpr F = map_of({"z"}, 1);
    const RankGrowth g = rank_growth("psi", 1, {2, 4, 6, 8, 10}, &F);
    bool strict = true;
    for (std::size_t k = 1; k < g.table.size(); ++k) strict = strict && g.table[k].second > g.table[k - 1].second;
    rec.observed = strict && g.hint == "growing";
    rec.rankTable = g.table;
  });
  run.check("umehara.slice_identities", std::nullopt, [&](CheckRecord& rec) {
    Sampler rng(seed + 4);
    double worst = 0.0;
    constexpr int kOrder = 30;
    for (int k = 0; k < 20; ++k) {
      const Complex zeta = rng.point_in_ball(1, 0.5)[0];
      const double x = std::norm(zeta);
      for (int p = 1; p <= 3; ++p)
        for (SpaceKind kind : {SpaceKind::Ball, SpaceKind::Projective}) {
          const SpaceForm sf(kind, 3);
          Point z(3);
          z[0] = zeta;
          const double sign = kind == SpaceKind::Ball ? -1.0 : 1.0;
          const double closed = std::pow(1.0 + sign * x, -(p + 1));
          const Complex minor = wedge_power_coeffs(metric(sf, z), p).entries(0, 0);
          const BiSeries s = kind == SpaceKind::Ball ? ball_slice(p, kOrder) : proj_slice(p, kOrder);
          worst = std::max({worst, std::abs(minor - closed), std::abs(s.evaluate(zeta) - closed)});
        }
    }
    rec.observed = worst < 1e-10;
    rec.residual = worst;
  });
}

void indefinite_checks(Runner& run, std::uint64_t seed) {
  run.check("indefinite.euclidean", std::nullopt, [&](CheckRecord& rec) {
    bool ok = true;
    for (int n = 1; n <= 4; ++n)
      for (int s = 0; s <= n; ++s) {
        const SpaceForm sf(SpaceKind::Euclidean, n, s);
        for (const auto& z : sample_chart_points(sf, 5, seed + n)) {
          const HermitianMatrix g = metric(sf, z);
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              ok = ok && g(j, k) == Complex(j == k ? (j < s ? 1.0 : -1.0) : 0.0);
        }
      }
    rec.observed = ok;
  });
  // Hermitian, center signature (n - s negative, s positive), and agreement
  // with the complex Hessian of the potential -+log(1 -+ ||w||_s^2).
  auto curved = [&](const std::string& name, SpaceKind kind) {
    run.check(name, std::nullopt, [&](CheckRecord& rec) {
      bool ok = true;
      double worst = 0.0;
      for (int n = 1; n <= 3; ++n)
        for (int s = 0; s <= n; ++s) {
          const SpaceForm sf(kind, n, s);
          const Signature sig = signature(metric(sf, Point(static_cast<std::size_t>(n))));
          ok = ok && sig == Signature{static_cast<std::size_t>(n - s), 0, static_cast<std::size_t>(s)};
          auto potential = [&](const std::vector<Complex>& z) {
            const double ns = sf.norm_s(z);
            return kind == SpaceKind::Ball ? -std::log(1.0 - ns) : std::log(1.0 + ns);
          };
          for (const auto& z : sample_chart_points(sf, 5, seed + 20 + n, 0.6)) {
            const HermitianMatrix g = metric(sf, z);
            const CMatrix& gm = g.matrix();
            for (std::size_t j = 0; j < gm.rows(); ++j)
              for (std::size_t k = 0; k < gm.cols(); ++k) ok = ok && std::abs(gm(j, k) - std::conj(gm(k, j))) < 1e-12;
            worst = std::max(worst, (hessian_fd(potential, z, 1e-4) - gm).max_abs());
          }
        }
      rec.observed = ok && worst < 1e-5;
      rec.residual = worst;
    });
  };
  curved("indefinite.ball", SpaceKind::Ball);
  curved("indefinite.projective", SpaceKind::Projective);
  run.check("indefinite.minors", std::nullopt, [&](CheckRecord& rec) {
    Sampler rng(seed + 5);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = rng.uniform_int(1, 4);
      const int s = rng.uniform_int(0, n);
      const SpaceKind kind = trial % 3 == 0 ? SpaceKind::Euclidean : trial % 3 == 1 ? SpaceKind::Ball : SpaceKind::Projective;
      const SpaceForm sf(kind, n, s);
      const Point z = sample_chart_points(sf, 1, seed + 100 + static_cast<std::uint64_t>(trial), 0.6)[0];
      const HermitianMatrix g = metric(sf, z);
      const int p = rng.uniform_int(1, n);
      const PPFormMatrix w = wedge_power_coeffs(g, p);
      for (std::size_t a = 0; a < w.basis.size(); ++a)
        for (std::size_t b = 0; b < w.basis.size(); ++b) {
          const Complex brute = leibniz_det(g.matrix().select(w.basis[a], w.basis[b]));
          worst = std::max(worst, std::abs(w.entries(a, b) - brute) / (1.0 + std::abs(brute)));
        }
    }
    rec.observed = worst < 1e-11;
    rec.residual = worst;
  });
}

void relatives_checks(Runner& run, std::uint64_t seed) {
  run.check("relatives.veronese", std::nullopt, [&](CheckRecord& rec) {
    const auto points = sample_chart_points(SpaceForm::projective(1), 50, seed);
    const PullbackResult r = relatives_test(map_of({"sqrt(2)*z", "z^2"}, 1), map_of({"z"}, 1),
                                            SpaceForm::projective(2), SpaceForm::projective(1), 1, 1, points);
    rec.observed = r.pass && std::abs(r.lambdaHat - 2.0) < 1e-10;
    rec.lambdaHat = r.lambdaHat;
    rec.residual = r.maxResidual;
  });
  run.check("relatives.ball_vs_projective", std::nullopt, [&](CheckRecord& rec) {
    const auto points = sample_chart_points(SpaceForm::ball(1), 50, seed);
    const PullbackResult r = relatives_test(map_of({"z", "0"}, 1), map_of({"z"}, 1), SpaceForm::ball(2),
                                            SpaceForm::projective(1), 1, 1, points);
    rec.observed = !r.pass && r.ratioSpread > 1e-2;
    rec.lambdaHat = r.lambdaHat;
    rec.residual = r.maxResidual;
    rec.details["ratioSpread"] = r.ratioSpread;
  });
}

}  // namespace

Report run_reference_suite(std::uint64_t seed) {
  Report rep;
  rep.scenario = Json{{"mode", "suite"}, {"seed", seed}};
  Runner run(rep);
  rigidity_checks(run, seed);
  flat_example_checks(run, seed);
  veronese_checks(run, seed);
  ricci_checks(run, seed);
  levi_checks(run, seed);
  probe_checks(run, seed);
  umehara_checks(run, seed);
  indefinite_checks(run, seed);
  relatives_checks(run, seed);
  std::stable_sort(rep.checks.begin(), rep.checks.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  return rep;
}

}  // namespace kform::verify
