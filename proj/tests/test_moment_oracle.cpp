#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "bsz2d/errors.hpp"
#include "bsz2d/examples_suite.hpp"
#include "bsz2d/moment_oracle.hpp"
#include "support/oracles.hpp"

using namespace bsz2d;
namespace to = testing_oracle;

namespace {

constexpr double kPi = std::numbers::pi;

WeightSpec ex1(double a) { return a == 0.0 ? WeightSpec::product({}) : WeightSpec::product({-a}); }

// Makes a polynomial in y alone, so evaluate() can be compared with U_j.
BivariatePoly y_poly(std::initializer_list<std::pair<int, double>> terms) {
  BivariatePoly p;
  for (auto [j, c] : terms) p = p + BivariatePoly::term(Basis::ChebU, 0, j, c);
  return p;
}

}  // namespace

TEST(Moment, SingleFactorIsProbability) {
  MomentOracle o(ex1(0.5));
  EXPECT_NEAR(o.moment(0, 0), 1.0, 1e-14);
}

TEST(Moment, ChebyshevSecondMoment) {
  MomentOracle o(ex1(0.0));
  EXPECT_NEAR(o.moment(2, 0), 0.25, 1e-13);
  EXPECT_NEAR(o.moment(0, 2), 0.25, 1e-13);
}

// Frozen from the Gauss-U product rule in tests/support (400 nodes):
// a = 0.5 -> 0.12500000000000011, a = -0.3 -> -0.07500000000000083.
TEST(Moment, SingleFactorMixedMoment) {
  for (double a : {0.5, -0.3, 0.8}) {
    MomentOracle o(ex1(a));
    to::Measure mu(to::product_h({-a}), 400);
    EXPECT_NEAR(mu.moment(1, 1), a / 4, 1e-12);
    EXPECT_NEAR(o.moment(1, 1), a / 4, 1e-10) << "a=" << a;
  }
}

TEST(Moment, RawMassOfSingleFactor) {
  for (double a : {0.2, 0.7}) {
    auto t = MomentOracle(ex1(a)).table(2);
    EXPECT_NEAR(t->raw_mass, 1.0 / (1 - a * a), 1e-10);
  }
}

TEST(Moment, OddTotalDegreeVanishesForSingleFactor) {
  MomentOracle o(ex1(0.6));
  for (int i = 0; i <= 7; ++i)
    for (int j = 0; j <= 7; ++j)
      if ((i + j) % 2 == 1) EXPECT_NEAR(o.moment(i, j), 0.0, 1e-13) << i << "," << j;
}

TEST(Moment, AgreesWithGaussRule) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const auto h = to::random_stable_h(rng, 1 + trial % 2, trial % 3);
    const auto spec = WeightSpec::generic(h);
    MomentOracle o(spec);
    to::Measure mu(h, 300);
    for (int i = 0; i <= 5; ++i)
      for (int j = 0; j <= 5; ++j) EXPECT_NEAR(o.moment(i, j), mu.moment(i, j), 1e-10) << i << "," << j;
    EXPECT_NEAR(o.table(2)->raw_mass, mu.raw_mass(), 1e-9 * mu.raw_mass());
  }
}

TEST(Moment, ErrorEstimateBoundsRefinement) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const auto h = to::random_stable_h(rng, 2, trial % 2);
    const auto spec = WeightSpec::generic(h);
    const auto t = compute_moment_table(spec, 6);
    QuadratureOptions fine;
    fine.tol = 1e-14;
    const auto f = compute_moment_table(spec, 6, fine);
    ASSERT_GE(f.resolution, t.resolution);
    const double diff = (f.modified - t.modified).cwiseAbs().maxCoeff();
    EXPECT_LE(diff, t.error_estimate + 1e-15);
  }
}

TEST(Moment, ThreadCountDoesNotChangeTable) {
  const auto spec = WeightSpec::product({0.4, -0.6});
  QuadratureOptions one, many;
  many.threads = 4;
  const auto a = compute_moment_table(spec, 8, one);
  const auto b = compute_moment_table(spec, 8, many);
  EXPECT_EQ(a.resolution, b.resolution);
  EXPECT_EQ((a.modified - b.modified).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Moment, ConvergenceCapReported) {
  QuadratureOptions opt;
  opt.max_resolution = 64;
  opt.tol = 1e-15;
  EXPECT_THROW(compute_moment_table(WeightSpec::product({0.95}), 4, opt), AccuracyFailure);
}

TEST(Moment, NegativeIndexRejected) {
  MomentOracle o(ex1(0.2));
  EXPECT_THROW(o.moment(-1, 0), InvalidArgument);
}

TEST(MomentCache, FirstWriterWins) {
  auto& cache = MomentCache::global();
  const std::string fp = "first-writer-test";
  auto first = std::make_shared<MomentTable>(compute_moment_table(ex1(0.1), 4));
  auto second = std::make_shared<MomentTable>(*first);
  second->raw_mass = -1.0;
  EXPECT_EQ(cache.insert(fp, 1e-11, first), first);
  EXPECT_EQ(cache.insert(fp, 1e-11, second), first);
  EXPECT_EQ(cache.find(fp, 1e-11, 4), first);
}

TEST(MomentCache, ConcurrentReadersSeeOneTable) {
  MomentCache::global().clear();
  const auto spec = WeightSpec::product({0.3, 0.5});
  std::vector<std::shared_ptr<const MomentTable>> seen(8);
  std::vector<std::thread> pool;
  for (int k = 0; k < 8; ++k)
    pool.emplace_back([&, k] { seen[k] = MomentOracle(spec).table(6); });
  for (auto& t : pool) t.join();
  for (int k = 1; k < 8; ++k) EXPECT_EQ(seen[k], seen[0]);
}

TEST(MomentCache, SpillDirectoryRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "bsz2d_spill_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ::setenv("BSZ2D_CACHE_DIR", dir.c_str(), 1);
  const auto spec = WeightSpec::product({0.35});
  MomentCache::global().clear();
  const auto a = MomentOracle(spec).table(5);
  EXPECT_FALSE(std::filesystem::is_empty(dir));
  MomentCache::global().clear();
  const auto b = MomentOracle(spec).table(5);
  ::unsetenv("BSZ2D_CACHE_DIR");
  std::filesystem::remove_all(dir);
  EXPECT_EQ(a->resolution, b->resolution);
  EXPECT_EQ((a->modified - b->modified).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Univariate, ChebyshevMass) {
  EXPECT_NEAR(univariate_moment(ex1(0.0), 0, 0.3), kPi / 2, 1e-13);
}

TEST(Univariate, LinearQuadraticMarginal) {
  const double a = 0.5, b = 0.3;
  const auto ex = ExampleId::linear_quadratic(a, b);
  const auto spec = example_weight(ex);
  const double c = marginal_constant(ex);
  for (double y : {-0.9, -0.2, 0.0, 0.6, 1.0}) {
    const double want = 1.0 / (1 - 4 * a * b * y + 4 * a * a * b * b);
    EXPECT_NEAR(c * univariate_moment(spec, 0, y), want, 1e-9 * want) << y;
  }
}

TEST(Univariate, TwoFactorMarginalShape) {
  const double a1 = 0.4, a2 = -0.6, p = a1 * a2;
  const auto spec = WeightSpec::product({a1, a2});
  auto shape = [&](double y) { return (1 + p) / ((1 - p) * ((1 + p) * (1 + p) - 4 * p * y * y)); };
  const double ratio = univariate_moment(spec, 0, 0.0) / shape(0.0);
  for (double y : {-0.8, -0.1, 0.5, 0.95})
    EXPECT_NEAR(univariate_moment(spec, 0, y) / shape(y), ratio, 1e-9 * ratio) << y;
}

TEST(Univariate, AgreesWithGaussRule) {
  std::mt19937_64 rng(19);
  const auto h = to::random_stable_h(rng, 2, 1);
  const auto spec = WeightSpec::generic(h);
  for (double y : {-0.7, 0.1, 0.9})
    for (int i = 0; i <= 4; ++i) {
      const double want = to::univariate(h, y, [i](double x) { return std::pow(x, i); });
      EXPECT_NEAR(univariate_moment(spec, i, y), want, 1e-10);
    }
}

TEST(Univariate, RejectsOutsideInterval) {
  EXPECT_THROW(univariate_moment(ex1(0.2), 0, 1.5), InvalidArgument);
}

TEST(GramSchmidt, ChebyshevTotalDegreeTwo) {
  const auto sys = gram_schmidt(MomentOracle(ex1(0.0)), Ordering::TotalDegree, 2);
  const std::vector<Slot> want{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  ASSERT_EQ(sys.entries.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    EXPECT_EQ(sys.entries[k].index, want[k]);
    const auto expected = BivariatePoly::term(Basis::ChebU, want[k].i, want[k].j, 1.0);
    EXPECT_LT(max_abs_diff(sys.entries[k].poly, expected), 1e-12);
  }
}

TEST(GramSchmidt, MatchesMonomialOracleInEveryOrdering) {
  std::mt19937_64 rng(23);
  const auto h = to::random_stable_h(rng, 1, 1);
  MomentOracle o(WeightSpec::generic(h));
  to::Measure mu(h, 300);
  const std::vector<std::pair<Ordering, std::vector<Slot>>> cases{
      {Ordering::TotalDegree, total_degree_slots(3)},
      {Ordering::Lex, lex_slots(2, 2)},
      {Ordering::RevLex, revlex_slots(2, 2)}};
  for (const auto& [ord, slots] : cases) {
    const auto sys = ord == Ordering::TotalDegree ? gram_schmidt(o, ord, 3) : gram_schmidt(o, ord, 2, 2);
    const auto ref = to::monomial_gram_schmidt(mu, slots);
    ASSERT_EQ(sys.entries.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k)
      EXPECT_LT(max_abs_diff(to_monomial(sys.entries[k].poly), ref[k]), 1e-8)
          << to_string(ord) << " entry " << k;
  }
}

TEST(GramSchmidt, TwoFactorPureYEntry) {
  const double a1 = 0.5, a2 = 0.4;
  MomentOracle o(WeightSpec::product({a1, a2}));
  const auto sys = gram_schmidt(o, Ordering::TotalDegree, 3);
  const auto& e = sys.at({0, 3});
  const auto want = y_poly({{3, 1.0}, {1, -a1 * a2}});
  const double scale = e.poly.coeff(0, 3);
  EXPECT_GT(scale, 0.0);
  EXPECT_LT(max_abs_diff((1.0 / scale) * e.poly, want), 1e-9);
}

TEST(GramSchmidt, SingleFactorLexWindowAgreesWithOracle) {
  const double a = 0.45;
  MomentOracle o(ex1(a));
  to::Measure mu(to::product_h({-a}), 300);
  const auto sys = gram_schmidt(o, Ordering::Lex, 3, 3);
  const auto ref = to::monomial_gram_schmidt(mu, lex_slots(3, 3));
  for (std::size_t k = 0; k < ref.size(); ++k)
    EXPECT_LT(max_abs_diff(to_monomial(sys.entries[k].poly), ref[k]), 1e-8) << k;
}

TEST(GramSchmidt, Orthonormal) {
  MomentOracle o(WeightSpec::product({0.7, -0.2}));
  const auto sys = gram_schmidt(o, Ordering::TotalDegree, 5);
  for (std::size_t a = 0; a < sys.entries.size(); ++a)
    for (std::size_t b = a; b < sys.entries.size(); ++b)
      EXPECT_NEAR(o.inner(sys.entries[a].poly, sys.entries[b].poly), a == b ? 1.0 : 0.0, 1e-10);
}

TEST(GramSchmidt, LeadingCoefficientsPositive) {
  MomentOracle o(WeightSpec::product({-0.6}));
  for (Ordering ord : {Ordering::Lex, Ordering::RevLex}) {
    const auto sys = gram_schmidt(o, ord, 3, 2);
    for (const auto& e : sys.entries) EXPECT_GT(e.poly.coeff(e.index.i, e.index.j), 0.0);
  }
}

TEST(GramSchmidt, ReorthonormalizationIsIdempotent) {
  std::mt19937_64 rng(29);
  MomentOracle o(WeightSpec::generic(to::random_stable_h(rng, 2, 0)));
  const auto sys = gram_schmidt(o, Ordering::TotalDegree, 4);
  std::vector<BivariatePoly> polys;
  for (const auto& e : sys.entries) polys.push_back(e.poly);
  const auto again = orthonormalize(o, polys, Ordering::TotalDegree);
  for (std::size_t k = 0; k < polys.size(); ++k) EXPECT_LT(max_abs_diff(again[k], polys[k]), 1e-10) << k;
}

TEST(GramSchmidt, IllConditionedWindowReported) {
  QuadratureOptions opt;
  opt.max_resolution = 1 << 14;
  MomentOracle o(WeightSpec::product({0.98}), opt);
  EXPECT_THROW(gram_schmidt_slots(o, {{0, 0}, {0, 0}}), UnreliableOracle);
}

TEST(MomentMatrix, LexWindowIsDoublyHankel) {
  MomentOracle o(WeightSpec::product({0.3, -0.5}));
  const auto slots = lex_slots(3, 3);
  const auto h = monomial_moment_matrix(o, slots);
  EXPECT_EQ(doubly_hankel_defect(h, slots), 0.0);
  for (std::size_t a = 0; a < slots.size(); ++a)
    for (std::size_t b = 0; b < slots.size(); ++b)
      EXPECT_EQ(h(a, b), o.moment(slots[a].i + slots[b].i, slots[a].j + slots[b].j));
}
