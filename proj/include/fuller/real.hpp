#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

namespace fuller {

/// Decimal digits carried by the simulation scalar.
inline constexpr unsigned kRealDigits = 140;

/// Wide floating type used by the extremal integrator and the switching-set analysis.
using real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<kRealDigits>,
                                           boost::multiprecision::et_off>;

using RealVector = std::vector<real>;

/// Correctly rounded conversion of an exact rational.
real to_real(const mpq_class& q);

/// Exact rational value of a finite real.
mpq_class to_rational(const real& x);

/// Decimal rendering with the given number of significant digits.
std::string format_real(const real& x, int digits = 40);

/// Parses a decimal or "p/q" string at full working precision.
real parse_real(const std::string& text);

template <class T>
T from_rational(const mpq_class& q);

template <>
inline mpq_class from_rational<mpq_class>(const mpq_class& q) {
  return q;
}
template <>
inline double from_rational<double>(const mpq_class& q) {
  return q.get_d();
}
template <>
inline real from_rational<real>(const mpq_class& q) {
  return to_real(q);
}

}  // namespace fuller
