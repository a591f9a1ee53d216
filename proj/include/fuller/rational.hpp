#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace fuller {

/// Exact rational number; GMP keeps it canonical (reduced, positive denominator).
using Rational = mpq_class;

/// Raised for inputs that are well-formed commands but violate a domain precondition.
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p", "p/q" or a plain decimal such as "-0.125" or "3e-2" exactly.
/// Throws domain_error on a zero denominator or malformed text.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text, or "p" when the denominator is one.
std::string to_string(const Rational& q);

}  // namespace fuller
