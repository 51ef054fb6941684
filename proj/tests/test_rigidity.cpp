#include <gtest/gtest.h>

#include <cmath>

#include "kform/error.hpp"
#include "kform/pp_forms.hpp"
#include "kform/rigidity.hpp"
#include "kform/sampling.hpp"
#include "oracles.hpp"

using namespace kform;

namespace {

const std::vector<std::string> kFlat2 = {"z1 + 1/(1-z2)", "z2"};
const std::vector<std::string> kFlat3 = {"z1 + 1/(1-z2)", "z2", "0"};
const std::vector<std::string> kVeronese = {"sqrt(2)*z", "z^2"};

// Every p-subset product, enumerated by bitmask rather than IndexBasis.
std::vector<double> subset_products(const std::vector<double>& l, int p) {
  std::vector<double> out;
  const int m = static_cast<int>(l.size());
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != p) continue;
    double prod = 1.0;
    for (int k = 0; k < m; ++k)
      if (mask & (1u << k)) prod *= l[static_cast<std::size_t>(k)];
    out.push_back(prod);
  }
  return out;
}

}  // namespace

TEST(EigenProducts, Examples) {
  EXPECT_TRUE(eigen_products_check({{2, 2, 2}, 2, 4.0}, 1e-12));
  EXPECT_FALSE(eigen_products_check({{1, 2, 4}, 2, 4.0}, 1e-9));
  EXPECT_FALSE(eigen_products_check({{1, 2, 4}, 2, 2.0}, 1e-9));
  Sampler rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = rng.uniform_int(2, 6), p = rng.uniform_int(1, m);
    const double lambda = rng.uniform(0.1, 10.0);
    const std::vector<double> l(static_cast<std::size_t>(m), std::pow(lambda, 1.0 / p));
    EXPECT_TRUE(eigen_products_check({l, p, lambda}, 1e-12));
  }
}

TEST(EigenProducts, AgreesWithBitmaskOracle) {
  Sampler rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = rng.uniform_int(1, 6), p = rng.uniform_int(1, m);
    std::vector<double> l(static_cast<std::size_t>(m));
    // small rational profiles so exact ties are common
    for (auto& x : l) x = rng.uniform_int(1, 3) / 2.0;
    std::sort(l.begin(), l.end());
    const double lambda = subset_products(l, p).front();
    bool oracle_pass = true;
    for (double prod : subset_products(l, p)) oracle_pass &= std::abs(prod - lambda) <= 1e-9 * lambda;
    EXPECT_EQ(eigen_products_check({l, p, lambda}, 1e-9), oracle_pass);
  }
}

TEST(EigenProducts, PigeonholeForcesEqualityBelowTopDegree) {
  // For p < m, any rational profile passing the product check is constant.
  Sampler rng(33);
  int passed = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const int m = rng.uniform_int(2, 6), p = rng.uniform_int(1, m - 1);
    std::vector<double> l(static_cast<std::size_t>(m));
    for (auto& x : l) x = rng.uniform_int(1, 2) * 0.5;
    const double lambda = subset_products(l, p).front();
    if (!eigen_products_check({l, p, lambda}, 1e-9)) continue;
    ++passed;
    const auto [lo, hi] = std::minmax_element(l.begin(), l.end());
    EXPECT_LE(*hi - *lo, 10 * 1e-9);
  }
  EXPECT_GT(passed, 0);
}

TEST(EigenProducts, TopDegreeAdmitsNonConstantProfiles) {
  const double lambda = 3.0;
  const EigenProfile profile{{0.5, 2.0 * lambda}, 2, lambda};
  EXPECT_TRUE(eigen_products_check(profile, 1e-12));
  EXPECT_THROW(conclude_isometry_factor(profile), PreconditionError);
}

TEST(IsometryFactor, Examples) {
  const auto f = conclude_isometry_factor({{2, 2, 2}, 2, 4.0});
  ASSERT_TRUE(f.has_value());
  EXPECT_NEAR(*f, 2.0, 1e-14);
  EXPECT_FALSE(conclude_isometry_factor({{1, 2, 4}, 2, 4.0}).has_value());
}

TEST(IsometryFactor, FlatExampleRefusesTopDegree) {
  const SpaceForm c2 = SpaceForm::euclidean(2);
  const auto profile = eigen_profile_at(MapExpr::parse(kFlat2, 2), c2, c2, 2, {0.2, 0.3});
  ASSERT_EQ(profile.lambdas.size(), 2u);
  EXPECT_GT(profile.lambdas[1] - profile.lambdas[0], 1e-3);
  EXPECT_NEAR(profile.lambdaTarget, 1.0, 1e-12);
  EXPECT_THROW(conclude_isometry_factor(profile), PreconditionError);
}

TEST(IsometryFactor, RecoversFromConjugatedConstruction) {
  Sampler rng(34);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = rng.uniform_int(2, 6), p = rng.uniform_int(1, m - 1);
    const double lambda = std::exp(rng.uniform(-2.0, 2.0));
    const double root = std::pow(lambda, 1.0 / p);
    // h = root * g, disguised by a random base form and unitary.
    const HermitianMatrix g0 = rng.positive_definite(static_cast<std::size_t>(m));
    const CMatrix u = rng.unitary(static_cast<std::size_t>(m));
    const HermitianMatrix g(u.adjoint() * g0.matrix() * u);
    const HermitianMatrix h = root * g;
    const auto f = conclude_isometry_factor(eigen_profile(h, g, p, lambda));
    ASSERT_TRUE(f.has_value()) << "trial " << trial;
    EXPECT_LT(std::abs(*f - root), 1e-8 * root);
  }
}

TEST(IsometryFactor, NonConstantDiagonalsFail) {
  Sampler rng(35);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = rng.uniform_int(2, 6), p = rng.uniform_int(1, m - 1);
    std::vector<double> l(static_cast<std::size_t>(m));
    for (auto& x : l) x = rng.uniform(0.2, 3.0);
    std::sort(l.begin(), l.end());
    if (l.back() - l.front() < 1e-3) continue;
    const double lambda = subset_products(l, p).front();
    EXPECT_FALSE(eigen_products_check({l, p, lambda}, 1e-8));
  }
}

TEST(IsometryCheck, Examples) {
  const SpaceForm p1 = SpaceForm::projective(1), p2 = SpaceForm::projective(2);
  EXPECT_TRUE(isometry_check(MapExpr::parse(kVeronese, 1), p1, p2, sample_chart_points(p1, 30, 1), 2.0, 1e-9).pass);
  const SpaceForm c2 = SpaceForm::euclidean(2), c3 = SpaceForm::euclidean(3);
  const auto pts = sample_chart_points(c2, 30, 2, 0.5);
  for (double factor : {0.5, 1.0, 2.0})
    EXPECT_FALSE(isometry_check(MapExpr::parse(kFlat3, 2), c2, c3, pts, factor, 1e-6).pass);
}

TEST(IsometryCheck, IdentityEverywhere) {
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k < 3; ++k) {
      const SpaceForm sf(static_cast<SpaceKind>(k), n);
      const auto r = isometry_check(MapExpr::identity(n), sf, sf, sample_chart_points(sf, 100, 3), 1.0, 1e-12);
      EXPECT_TRUE(r.pass) << sf.to_string();
      EXPECT_EQ(r.used, 100u);
    }
}

TEST(RicciPullback, Examples) {
  const SpaceForm b2 = SpaceForm::ball(2);
  EXPECT_TRUE(ricci_pullback_check(MapExpr::identity(2), b2, b2, sample_chart_points(b2, 30, 4), 1e-9).pass);

  const SpaceForm b1 = SpaceForm::ball(1);
  const std::vector<std::string> moebius = {"(z - 0.3)/(1 - 0.3*z)"};
  EXPECT_TRUE(ricci_pullback_check(MapExpr::parse(moebius, 1), b1, b1, sample_chart_points(b1, 30, 5), 1e-9).pass);

  // Flat target: Ricci identity holds trivially although F is no isometry.
  const SpaceForm c2 = SpaceForm::euclidean(2);
  const auto pts = sample_chart_points(c2, 30, 6, 0.5);
  EXPECT_TRUE(ricci_pullback_check(MapExpr::parse(kFlat2, 2), c2, c2, pts, 1e-9).pass);
  EXPECT_FALSE(isometry_check(MapExpr::parse(kFlat2, 2), c2, c2, pts, 1.0, 1e-6).pass);
}

TEST(RicciPullback, SkipsSingularPoints) {
  const SpaceForm c1 = SpaceForm::euclidean(1);
  const std::vector<std::string> sq = {"z^2"};
  const auto r = ricci_pullback_check(MapExpr::parse(sq, 1), c1, c1, {{0.0}, {0.5}}, 1e-9);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.used, 1u);
  EXPECT_EQ(r.warnings.size(), 1u);
  const auto none = ricci_pullback_check(MapExpr::parse(sq, 1), c1, c1, {{0.0}}, 1e-9);
  EXPECT_FALSE(none.pass);
}

TEST(RicciPullback, NonIsometryOfBallFails) {
  const SpaceForm b1 = SpaceForm::ball(1);
  const std::vector<std::string> half = {"z/2"};
  EXPECT_FALSE(ricci_pullback_check(MapExpr::parse(half, 1), b1, b1, sample_chart_points(b1, 20, 7), 1e-9).pass);
}
