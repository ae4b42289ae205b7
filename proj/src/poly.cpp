#include "bsz2d/exact.hpp"
#include "bsz2d/laurent.hpp"
#include "bsz2d/poly.hpp"

#include <cmath>

namespace bsz2d {

double max_abs_diff(const BivariatePoly& p, const BivariatePoly& q) {
  if (!p.is_zero() && !q.is_zero() && p.basis() != q.basis()) throw BasisMismatch();
  const int r = std::max(p.coeffs().rows(), q.coeffs().rows());
  const int c = std::max(p.coeffs().cols(), q.coeffs().cols());
  double d = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) d = std::max(d, std::abs(p.coeff(i, j) - q.coeff(i, j)));
  return d;
}

double max_abs_coeff(const BivariatePoly& p) {
  double d = 0.0;
  for (int i = 0; i < p.coeffs().rows(); ++i)
    for (int j = 0; j < p.coeffs().cols(); ++j) d = std::max(d, std::abs(p.coeff(i, j)));
  return d;
}

double max_abs_diff(const LaurentPoly<double>& p, const LaurentPoly<double>& q) {
  double d = 0.0;
  const LaurentPoly<double> diff = p - q;
  for (const auto& [e, c] : diff.terms()) d = std::max(d, std::abs(c));
  return d;
}

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("non-finite value has no rational form");
  int exp = 0;
  double mant = std::frexp(v, &exp);  // v = mant * 2^exp, 0.5 <= |mant| < 1
  // 53 bits of mantissa as an integer.
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational r(scaled);
  exp -= 53;
  Rational two_pow = 1;
  for (int k = 0; k < std::abs(exp); ++k) two_pow *= 2;
  return exp >= 0 ? r * two_pow : r / two_pow;
}

BivariatePoly to_double(const RationalBivariatePoly& p) {
  const auto& g = p.coeffs();
  Grid<double> out(g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) out(i, j) = static_cast<double>(g(i, j));
  return {p.basis(), std::move(out)};
}

}  // namespace bsz2d
