#include "fuller/real.hpp"

#include "fuller/rational.hpp"

#include <mpfr.h>

#include <sstream>

namespace fuller {

real to_real(const mpq_class& q) {
  real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

mpq_class to_rational(const real& x) {
  if (!boost::multiprecision::isfinite(x)) throw domain_error("non-finite value has no rational form");
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x.backend().data());
  return q;
}

std::string format_real(const real& x, int digits) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

real parse_real(const std::string& text) {
  return to_real(parse_rational(text));
}

}  // namespace fuller
