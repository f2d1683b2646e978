#pragma once

// Exact arbitrary-precision rational arithmetic.  Everything the library
// computes (allocations, interim probabilities, cake measures) is exact;
// floating point appears only inside Monte-Carlo samplers, and every sampled
// double is converted to the exact dyadic rational it represents before any
// mechanism sees it.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "fairdiv/errors.hpp"

namespace fairdiv {

using Integer = boost::multiprecision::cpp_int;
// Stored in lowest terms with positive denominator (the backend maintains
// this canonical form after every operation).
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Renders "p" for integers and "p/q" otherwise -- the canonical text form
// used in every JSON/CSV report.
std::string to_string(const Rational& r);

// Accepts "p/q", integer literals, and decimal literals with optional
// exponent ("0.6" -> 3/5, "1.25e-2" -> 1/80).  Decimal conversion is exact.
Rational rational_from_string(const std::string& text);

// Exact value of the double (dyadic rational).  Rejects NaN/infinity.
Rational rational_from_double(double x);

double to_double(const Rational& r);

// r^e for integer e; throws ConfigError on 0^negative.
Rational pow_rational(const Rational& r, long e);

// floor(sqrt(n)) for n >= 0.
Integer isqrt(const Integer& n);

// True iff r is the square of a rational; if so *root is set to the
// non-negative square root.
bool perfect_square(const Rational& r, Rational* root);

}  // namespace fairdiv
