#pragma once

#include "fuller/rational.hpp"
#include "fuller/real.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fuller {

using Exponents = std::vector<unsigned>;

/// Graded lexicographic order: total degree first, then lexicographic on the exponent tuple.
bool grlex_less(const Exponents& a, const Exponents& b);

struct Monomial {
  Exponents exponents;
  Rational coeff;

  bool operator==(const Monomial&) const = default;
};

/// Multivariate polynomial with exact rational coefficients.
/// Terms are kept sorted by grlex_less with distinct exponents and nonzero coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t dim) : dim_(dim) {}

  /// Builds a polynomial from arbitrary terms, merging repeats and dropping zeros.
  static Polynomial from_terms(std::size_t dim, std::vector<Monomial> terms);
  static Polynomial constant(std::size_t dim, const Rational& c);
  /// The coordinate function x_i (0-based).
  static Polynomial variable(std::size_t dim, std::size_t i);
  static Polynomial monomial(std::size_t dim, Exponents exponents, const Rational& c);

  std::size_t dim() const { return dim_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;
  /// Coefficient of the given exponent tuple (zero when absent).
  Rational coefficient(const Exponents& e) const;

  Polynomial derivative(std::size_t i) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  bool operator==(const Polynomial& other) const = default;

  template <class T>
  T evaluate(std::span<const T> x) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Monomial> terms_;
};

template <class T>
T Polynomial::evaluate(std::span<const T> x) const {
  if (x.size() != dim_) throw domain_error("evaluation point has wrong dimension");
  T sum = T(0);
  for (const auto& term : terms_) {
    T value = from_rational<T>(term.coeff);
    for (std::size_t i = 0; i < dim_; ++i)
      for (unsigned k = 0; k < term.exponents[i]; ++k) value *= x[i];
    sum += value;
  }
  return sum;
}

}  // namespace fuller
