#pragma once

// Exact rational coefficients for validating cancellation-heavy steps. Only
// intended for modest degrees (up to ~32); cost grows quickly with degree.

#include <boost/multiprecision/cpp_int.hpp>

#include "bsz2d/laurent.hpp"
#include "bsz2d/poly.hpp"

namespace bsz2d {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

using RationalUnivariatePoly = BasicUnivariatePoly<Rational>;
using RationalBivariatePoly = BasicBivariatePoly<Rational>;
using RationalLaurentPoly = LaurentPoly<Rational>;

// Exact value of a double (every finite double is a dyadic rational).
Rational to_rational(double v);

BivariatePoly to_double(const RationalBivariatePoly& p);

}  // namespace bsz2d
