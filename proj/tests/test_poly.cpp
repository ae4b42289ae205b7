#include <random>

#include <gtest/gtest.h>

#include "bsz2d/exact.hpp"
#include "bsz2d/io.hpp"
#include "bsz2d/laurent.hpp"
#include "bsz2d/poly.hpp"

using namespace bsz2d;

namespace {

UnivariatePoly mono(std::vector<double> c) { return UnivariatePoly::monomial(std::move(c)); }

BivariatePoly cheb(int rows, int cols, std::vector<double> v) {
  Grid<double> g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = v[i * cols + j];
  return {Basis::ChebU, std::move(g)};
}

BivariatePoly ux(int n) { return lift_x(u_index<double>(n)); }
BivariatePoly uy(int n) { return lift_y(u_index<double>(n)); }

}  // namespace

TEST(UIndex, TwoIsFourXSquaredMinusOne) {
  EXPECT_EQ(to_monomial(u_index<double>(2)), mono({-1, 0, 4}));
}

TEST(UIndex, MinusOneIsZero) { EXPECT_TRUE(u_index<double>(-1).is_zero()); }

TEST(UIndex, MinusThreeIsMinusU1) {
  EXPECT_EQ(u_index<double>(-3), -1.0 * u_index<double>(1));
  EXPECT_EQ(u_index<double>(-2), -1.0 * u_index<double>(0));
}

TEST(UIndex, ThreeTermRecurrenceExactInMonomials) {
  for (int n = 1; n <= 40; ++n) {
    auto un = to_monomial(u_index<Rational>(n));
    auto lhs = to_monomial(u_index<Rational>(n + 1));
    std::vector<Rational> shifted(un.coeffs().size() + 1, Rational(0));
    for (std::size_t k = 0; k < un.coeffs().size(); ++k) shifted[k + 1] = Rational(2) * un.coeffs()[k];
    auto rhs = RationalUnivariatePoly::monomial(shifted) - to_monomial(u_index<Rational>(n - 1));
    EXPECT_EQ(lhs, rhs) << "n = " << n;
  }
}

TEST(UnivariatePoly, TrailingZerosTrimmed) {
  auto p = mono({1, 2, 0, 0});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_EQ(mono({0, 0}).degree(), kZeroDegree);
  EXPECT_TRUE(mono({}).is_zero());
}

TEST(UnivariatePoly, RoundTripExactAtDegree64) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-1000, 1000);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Rational> c(65);
    for (auto& v : c) v = Rational(num(rng), 997);
    c.back() = Rational(1, 3);
    auto p = RationalUnivariatePoly::cheb_u(c);
    EXPECT_EQ(to_cheb_u(to_monomial(p)), p);
    auto m = RationalUnivariatePoly::monomial(c);
    EXPECT_EQ(to_monomial(to_cheb_u(m)), m);
  }
}

TEST(UnivariatePoly, RoundTripDoubleWithinRelativeTolerance) {
  // Double precision holds 1e-12 only while 2^deg stays well below 1/eps.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int d = 0; d <= 12; ++d)
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> c(d + 1);
      for (auto& v : c) v = u(rng);
      c.back() = 0.5 + 0.5 * std::abs(c.back());
      for (Basis b : {Basis::ChebU, Basis::Monomial}) {
        UnivariatePoly p(b, c);
        auto other = b == Basis::ChebU ? to_monomial(p) : to_cheb_u(p);
        auto back = in_basis(other, b);
        double scale = 0, err = 0;
        for (int k = 0; k <= d; ++k) {
          scale = std::max(scale, std::abs(p.coeff(k)));
          err = std::max(err, std::abs(back.coeff(k) - p.coeff(k)));
        }
        EXPECT_LE(err, 1e-12 * scale) << "degree " << d;
      }
    }
}

TEST(Mul, U1TimesU1) { EXPECT_EQ(mul(ux(1), ux(1)), ux(2) + ux(0)); }

TEST(Mul, OneIsIdentity) {
  auto p = cheb(2, 3, {1, -2, 0.5, 3, 0, 7});
  EXPECT_EQ(mul(ux(0), p), p);
  EXPECT_EQ(mul(p, ux(0)), p);
}

TEST(Mul, YTimesUkIsHalfSum) {
  const BivariatePoly y = cheb(1, 2, {0, 0.5});
  for (int k = 1; k <= 10; ++k) {
    EXPECT_EQ(mul(y, uy(k)), 0.5 * (uy(k - 1) + uy(k + 1)));
    EXPECT_EQ(mul_y(uy(k)), 0.5 * (uy(k - 1) + uy(k + 1)));
  }
}

TEST(Mul, BasisMismatchThrows) {
  BivariatePoly m(Basis::Monomial, Grid<double>(1, 1, 1.0));
  EXPECT_THROW(mul(ux(1), m), BasisMismatch);
}

TEST(Mul, AgreesWithMonomialProduct) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    Grid<double> a(3, 4), b(4, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = u(rng);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = u(rng);
    BivariatePoly p(Basis::ChebU, a), q(Basis::ChebU, b);
    auto direct = to_monomial(mul(p, q));
    auto viaMono = mul(to_monomial(p), to_monomial(q));
    EXPECT_LT(max_abs_diff(direct, viaMono), 1e-12);
  }
}

TEST(Bivariate, DegreesAndLeadingSlots) {
  Grid<double> g(3, 3);
  g(2, 0) = 1;
  g(0, 2) = 1;
  g(1, 2) = 0.5;
  BivariatePoly p(Basis::ChebU, g);
  EXPECT_EQ(p.xdeg(), 2);
  EXPECT_EQ(p.ydeg(), 2);
  EXPECT_EQ(p.total_degree(), 3);
  EXPECT_EQ(p.leading_slot(Ordering::Lex), (Slot{2, 0}));
  EXPECT_EQ(p.leading_slot(Ordering::RevLex), (Slot{1, 2}));
  EXPECT_EQ(p.leading_slot(Ordering::TotalDegree), (Slot{1, 2}));
  BivariatePoly zero;
  EXPECT_EQ(zero.xdeg(), kZeroDegree);
  EXPECT_EQ(zero.total_degree(), kZeroDegree);
}

TEST(Bivariate, TrailingRowsAndColumnsTrimmed) {
  Grid<double> g(4, 4);
  g(1, 2) = 3;
  BivariatePoly p(Basis::ChebU, g);
  EXPECT_EQ(p.coeffs().rows(), 2);
  EXPECT_EQ(p.coeffs().cols(), 3);
}

TEST(TMap, SingleBasisElement) {
  auto t = t_map(ux(2));
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.coeff(-2, 0), 1.0);
}

TEST(TMap, ZeroIsEmpty) { EXPECT_TRUE(t_map(BivariatePoly()).is_zero()); }

TEST(TMap, TwoXTimesU3) {
  const BivariatePoly two_x = ux(1);  // U_1(x) = 2x
  auto t = t_map(mul(two_x, ux(3)));
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.coeff(-4, 0), 1.0);
  EXPECT_EQ(t.coeff(-2, 0), 1.0);
}

TEST(TMap, BasisMismatchThrows) {
  EXPECT_THROW(t_map(BivariatePoly(Basis::Monomial, Grid<double>(1, 1, 1.0))), BasisMismatch);
}

TEST(TMap, InjectiveOnBoundedDegree) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(-2, 2);
  std::vector<std::pair<BivariatePoly, LaurentPoly<double>>> seen;
  for (int t = 0; t < 200; ++t) {
    Grid<double> g(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = pick(rng);
    BivariatePoly p(Basis::ChebU, g);
    auto img = t_map(p);
    for (const auto& [q, qi] : seen) EXPECT_EQ(p == q, img == qi);
    seen.emplace_back(p, img);
  }
}

TEST(TMap, ProductIdentityOnRandomFactors) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> deg(0, 10);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = deg(rng), m = deg(rng);
    std::uniform_int_distribution<int> dp(0, n), dq(0, m);
    std::vector<double> pc(dp(rng) + 1), qc(dq(rng) + 1);
    for (auto& v : pc) v = u(rng);
    for (auto& v : qc) v = u(rng);
    const auto p = UnivariatePoly::monomial(pc), q = UnivariatePoly::monomial(qc);
    const BivariatePoly lhs_poly =
        mul(mul(lift_x(to_cheb_u(p)), lift_y(to_cheb_u(q))), mul(ux(n), uy(m)));
    const auto lhs = t_map(lhs_poly);
    const auto rhs = (joukowski(p).shifted(-n, 0)) * (joukowski(q).swapped().shifted(0, -m));
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12) << "n=" << n << " m=" << m;
  }
}

TEST(PolyJson, RoundTrip) {
  auto p = cheb(2, 3, {1, -2, 0.5, 3, 0, 0.1});
  auto j = to_json(p);
  EXPECT_EQ(j["basis"], "chebU");
  EXPECT_EQ(j["coeffs"].size(), 2u);
  EXPECT_EQ(poly_from_json(j), p);
  EXPECT_EQ(poly_from_json(nlohmann::json::parse(j.dump())), p);
}

TEST(Exact, RationalConversionIsExact) {
  for (double v : {0.1, -0.3, 1e-300, 123456.789, 0.0}) EXPECT_EQ(static_cast<double>(to_rational(v)), v);
  RationalBivariatePoly p = RationalBivariatePoly::term(Basis::ChebU, 1, 2, Rational(1, 4));
  EXPECT_EQ(to_double(p).coeff(1, 2), 0.25);
}
