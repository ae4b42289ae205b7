#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "bsz2d/io.hpp"
#include "bsz2d/roots.hpp"
#include "bsz2d/weights.hpp"
#include "support/oracles.hpp"

using namespace bsz2d;
namespace to = testing_oracle;

namespace {

UnivariatePoly mono(std::vector<double> c) { return UnivariatePoly::monomial(std::move(c)); }

void expect_h(const WeightSpec& s, const to::HCoeffs& ref, double tol = 1e-15) {
  ASSERT_EQ(s.n_h() + 1, static_cast<int>(ref.size()));
  for (std::size_t i = 0; i < ref.size(); ++i)
    for (std::size_t k = 0; k < std::max(ref[i].size(), s.h()[i].coeffs().size()); ++k) {
      const double want = k < ref[i].size() ? ref[i][k] : 0.0;
      EXPECT_NEAR(s.h()[i].coeff(static_cast<int>(k)), want, tol) << "h_" << i << " coeff " << k;
    }
}

}  // namespace

TEST(ExpandProduct, SingleFactor) {
  const double a = 0.37;
  auto s = expand_product({-a});
  EXPECT_FALSE(s.is_product());
  expect_h(s, {{1}, {0, -2 * a}, {a * a}});
  EXPECT_EQ(s.n_h(), 2);
  EXPECT_EQ(s.kappa(), 1);
}

TEST(ExpandProduct, TwoFactorsMatchBruteForce) {
  const double a1 = -0.4, a2 = 0.65;
  auto s = expand_product({a1, a2});
  expect_h(s, to::product_h({a1, a2}));
  // The same expansion written out per coefficient.
  expect_h(s, {{1}, {0, 2 * (a1 + a2)}, {a1 * a1 + a2 * a2, 0, 4 * a1 * a2}, {0, 2 * a1 * a2 * (a1 + a2)},
               {a1 * a1 * a2 * a2}},
           1e-15);
}

TEST(ExpandProduct, RejectsInvalidFactors) {
  EXPECT_THROW(expand_product({0.0}), InvalidWeight);
  EXPECT_THROW(expand_product({1.0}), InvalidWeight);
  EXPECT_THROW(expand_product({0.3, -1.2}), InvalidWeight);
  EXPECT_THROW(WeightSpec::product({0.5, 0.0}), InvalidWeight);
}

TEST(ExpandProduct, ThenTildeSingleFactor) {
  const double a = 0.45;
  auto t = tilde_expand(expand_product({a}));
  EXPECT_TRUE(t.reflected());
  // h~(x, w) = 1 + 2 a x w + a^2 w^2, parameter variable x.
  expect_h(t, {{1}, {0, 2 * a}, {a * a}});
  EXPECT_NEAR(std::abs(t.eval(std::polar(1.0, 0.3), 0.2)),
              std::abs(1.0 + 2 * a * 0.2 * std::polar(1.0, 0.3) + a * a * std::polar(1.0, 0.6)), 1e-15);
}

TEST(TildeExpand, SingleFactor) {
  const double a = -0.3;
  auto t = tilde_expand(WeightSpec::product({a}));
  EXPECT_TRUE(t.is_product());
  EXPECT_TRUE(t.reflected());
  expect_h(t, {{1}, {0, 2 * a}, {a * a}});
}

TEST(TildeExpand, IsAnInvolution) {
  auto s = WeightSpec::product({0.2, -0.7, 0.5});
  auto tt = tilde_expand(tilde_expand(s));
  EXPECT_EQ(tt.reflected(), s.reflected());
  EXPECT_EQ(tt.factors(), s.factors());
  expect_h(tt, to::product_h(s.factors()));
}

TEST(TildeExpand, TwoFactorsMatchBruteForce) {
  auto t = tilde_expand(WeightSpec::product({0.55, -0.25}));
  expect_h(t, to::product_h({0.55, -0.25}));
  EXPECT_EQ(t.n_f(), 2);
}

TEST(TildeExpand, GenericWithoutFactorizationUnsupported) {
  auto g = WeightSpec::generic(std::vector<std::vector<double>>{{1}, {-0.3, 0.2}, {0.1}});
  EXPECT_THROW(tilde_expand(g), Unsupported);
  EXPECT_THROW(g.factors(), Unsupported);
  EXPECT_FALSE(g.factorization().has_value());
}

TEST(GenericH, Validation) {
  EXPECT_THROW(WeightSpec::generic(std::vector<std::vector<double>>{{0.9}}), InvalidWeight);
  EXPECT_THROW(WeightSpec::generic(std::vector<std::vector<double>>{{1, 0.1}}), InvalidWeight);
  // deg h_1 <= 1/2 - |1/2 - 1| = 0 for N = 1.
  EXPECT_THROW(WeightSpec::generic(std::vector<std::vector<double>>{{1}, {0, 0.5}}), InvalidWeight);
  // N = 4: deg h_2 <= 2, deg h_3 <= 1, deg h_4 = 0.
  EXPECT_NO_THROW(WeightSpec::generic(std::vector<std::vector<double>>{{1}, {0, 0.1}, {0, 0, 0.1}, {0, 0.1}, {0.01}}));
  EXPECT_THROW(WeightSpec::generic(std::vector<std::vector<double>>{{1}, {0, 0.1}, {0, 0, 0.1}, {0, 0, 0.1}, {0.01}}),
               InvalidWeight);
  // Trailing zero h_i are dropped.
  EXPECT_EQ(WeightSpec::generic(std::vector<std::vector<double>>{{1}, {0.2}, {0}}).n_h(), 1);
}

TEST(Stability, ProductAnalytic) {
  auto r = is_stable(WeightSpec::product({0.5}));
  EXPECT_TRUE(r.stable);
  EXPECT_TRUE(r.analytic);
  EXPECT_DOUBLE_EQ(r.min_modulus, 2.0);
}

TEST(Stability, BoundaryDoubleRootIsUnstable) {
  auto r = is_stable(WeightSpec::generic(std::vector<std::vector<double>>{{1}, {0, -2}, {1}}));
  EXPECT_FALSE(r.stable);
  EXPECT_NEAR(r.min_modulus, 1.0, 1e-6);
  ASSERT_TRUE(r.witness_y.has_value());
  EXPECT_NEAR(std::abs(*r.witness_y), 1.0, 1e-12);
}

TEST(Stability, ExpandedFactorNumericMargin) {
  auto r = is_stable(expand_product({-0.9}));
  EXPECT_TRUE(r.stable);
  EXPECT_FALSE(r.analytic);
  // y = +-1 gives a double root, resolved only to ~sqrt(eps).
  EXPECT_NEAR(r.min_modulus, 1 / 0.9, 1e-7);
  EXPECT_GE(r.samples, 129);
}

TEST(Stability, DegreeDropReported) {
  auto r = is_stable(WeightSpec::generic(std::vector<std::vector<double>>{{1}, {0.3}, {1e-17}}));
  EXPECT_FALSE(r.degree_drop_at.empty());
  EXPECT_TRUE(r.stable);
  EXPECT_NEAR(r.min_modulus, 1 / 0.3, 1e-9);
}

TEST(Stability, VerdictIndependentOfThreads) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    auto h = to::random_stable_h(rng, 1, 2);
    auto s = WeightSpec::generic(h);
    auto r1 = is_stable(s, 129, 1e-9, 1), r4 = is_stable(s, 129, 1e-9, 4);
    EXPECT_EQ(r1.stable, r4.stable);
    EXPECT_EQ(r1.min_modulus, r4.min_modulus);
    EXPECT_EQ(r1.witness_y, r4.witness_y);
  }
}

TEST(Stability, TopCoefficientBelowOneForStableGeneric) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    auto s = WeightSpec::generic(to::random_stable_h(rng, 1 + t % 2, t % 3));
    auto r = is_stable(s);
    ASSERT_TRUE(r.stable);
    EXPECT_LT(r.max_abs_top, 1.0);
  }
}

TEST(Stability, RejectsTooFewSamples) { EXPECT_THROW(is_stable(WeightSpec::product({0.5}), 1), InvalidArgument); }

TEST(Omega, HomogeneousAfterReflection) {
  std::mt19937_64 rng(29);
  for (int nf = 1; nf <= 4; ++nf) {
    auto s = WeightSpec::product(to::random_factors(rng, nf));
    // w^{N_f} omega(z, 1/w)
    const LaurentPoly<double> omega = s.omega();
    LaurentPoly<double> refl;
    for (const auto& [e, c] : omega.terms()) refl.add(e.first, -e.second, c);
    auto hom = refl.shifted(0, nf);
    EXPECT_TRUE(hom.homogeneous_of_degree(nf));
    for (const auto& [e, c] : hom.terms()) {
      EXPECT_GE(e.first, 0);
      EXPECT_EQ(e.second, nf - e.first);
    }
  }
}

TEST(ExpandProduct, DegreeBounds) {
  std::mt19937_64 rng(31);
  for (int nf = 1; nf <= 5; ++nf) {
    auto s = expand_product(to::random_factors(rng, nf));
    EXPECT_EQ(s.n_h(), 2 * nf);
    EXPECT_EQ(s.kappa(), nf);
    for (int i = 0; i <= s.n_h(); ++i) EXPECT_LE(s.h()[i].degree(), nf - std::abs(nf - i));
  }
}

TEST(Evaluation, GenericMatchesFactoredForm) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> th(0, 2 * std::numbers::pi), yy(-1, 1);
  for (int nf = 1; nf <= 3; ++nf) {
    auto a = to::random_factors(rng, nf);
    auto g = expand_product(a);
    auto p = WeightSpec::product(a);
    for (int t = 0; t < 100; ++t) {
      const double theta = th(rng), y = yy(rng);
      double direct = 1;
      for (double ai : a) direct *= std::norm(1.0 + 2 * ai * y * std::polar(1.0, theta) + ai * ai * std::polar(1.0, 2 * theta));
      EXPECT_NEAR(g.abs_h_sq(theta, y), direct, 1e-10 * direct);
      EXPECT_NEAR(p.abs_h_sq(theta, y), direct, 1e-10 * direct);
    }
  }
}

TEST(Fingerprint, CanonicalForProductsAndStable) {
  auto a = WeightSpec::product({0.3, -0.5});
  auto b = WeightSpec::product({-0.5, 0.3});
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_EQ(a.fingerprint(), WeightSpec::product({0.3, -0.5}).fingerprint());
  EXPECT_NE(a.fingerprint(), WeightSpec::product({0.3, -0.51}).fingerprint());
  EXPECT_NE(a.fingerprint(), expand_product({0.3, -0.5}).fingerprint());
}

TEST(WeightJson, ParsesBothForms) {
  auto p = weight_from_json(nlohmann::json::parse(R"({"product": [0.5, -0.25]})"));
  EXPECT_TRUE(p.is_product());
  EXPECT_EQ(p.factors(), (std::vector<double>{0.5, -0.25}));
  auto g = weight_from_json(nlohmann::json::parse(R"({"generic_h": [[1], [-0.6, -1.2], [0.36, 0.72], [-0.216]]})"));
  EXPECT_FALSE(g.is_product());
  EXPECT_EQ(g.n_h(), 3);
  EXPECT_EQ(weight_from_json(to_json(g)).fingerprint(), g.fingerprint());
  EXPECT_EQ(weight_from_json(to_json(p)).fingerprint(), p.fingerprint());
  EXPECT_THROW(weight_from_json(nlohmann::json::parse(R"({"foo": 1})")), InvalidWeight);
  EXPECT_THROW(weight_from_json(nlohmann::json::parse(R"({"product": "x"})")), InvalidWeight);
  EXPECT_THROW(weight_from_json(nlohmann::json::parse(R"({"generic_h": [[2]]})")), InvalidWeight);
}

TEST(Roots, CompanionMatrixRoots) {
  // (z - 2)(z + 0.5)(z - 3i)(z + 3i) = (z^2 - 1.5 z - 1)(z^2 + 9)
  const std::vector<double> c{-9, -13.5, 8, -1.5, 1};
  auto r = polynomial_roots(c);
  ASSERT_EQ(r.roots.size(), 4u);
  std::vector<double> mods;
  for (auto z : r.roots) mods.push_back(std::abs(z));
  std::sort(mods.begin(), mods.end());
  EXPECT_NEAR(mods[0], 0.5, 1e-12);
  EXPECT_NEAR(mods[1], 2.0, 1e-12);
  EXPECT_NEAR(mods[2], 3.0, 1e-12);
  EXPECT_NEAR(mods[3], 3.0, 1e-12);
}

TEST(Roots, BalancingPreservesSpectrum) {
  Eigen::MatrixXd a(3, 3);
  a << 1, 1e6, 0, 1e-6, 2, 1e4, 0, 1e-4, 3;
  Eigen::MatrixXd b = balance_matrix(a);
  auto ea = a.eigenvalues(), eb = b.eigenvalues();
  std::vector<double> va, vb;
  for (int i = 0; i < 3; ++i) va.push_back(ea(i).real()), vb.push_back(eb(i).real());
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(va[i], vb[i], 1e-9);
  EXPECT_LT(b.cwiseAbs().maxCoeff(), a.cwiseAbs().maxCoeff());
}
