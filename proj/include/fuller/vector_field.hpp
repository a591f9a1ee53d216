#pragma once

#include "fuller/polynomial.hpp"

#include <span>
#include <vector>

namespace fuller {

/// Polynomial vector field on R^n, one polynomial per component.
class PolyVectorField {
 public:
  PolyVectorField() = default;
  explicit PolyVectorField(std::vector<Polynomial> components);

  static PolyVectorField zero(std::size_t dim);
  /// Constant field with the given rational components.
  static PolyVectorField constant(const std::vector<Rational>& value);

  std::size_t dim() const { return components_.size(); }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& operator[](std::size_t i) const { return components_[i]; }
  bool is_zero() const;
  unsigned degree() const;

  /// Directional derivative f p = sum_i f^i d_i p.
  Polynomial apply(const Polynomial& p) const;

  PolyVectorField operator-() const;
  PolyVectorField& operator+=(const PolyVectorField& other);
  PolyVectorField& operator-=(const PolyVectorField& other);
  PolyVectorField& operator*=(const Rational& c);

  friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
  friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
  friend PolyVectorField operator*(PolyVectorField a, const Rational& c) { return a *= c; }
  friend PolyVectorField operator*(const Rational& c, PolyVectorField a) { return a *= c; }
  /// Pointwise product p * f.
  friend PolyVectorField operator*(const Polynomial& p, const PolyVectorField& f);

  bool operator==(const PolyVectorField& other) const = default;

 private:
  std::vector<Polynomial> components_;
};

/// [f,g]^j = sum_i (f^i d_i g^j - g^i d_i f^j).
PolyVectorField lie_bracket(const PolyVectorField& f, const PolyVectorField& g);

/// ad_g^k(h); ad_g^0(h) = h.
PolyVectorField ad_power(const PolyVectorField& g, const PolyVectorField& h, unsigned k);

template <class T>
std::vector<T> eval_at(const PolyVectorField& f, std::span<const T> x) {
  std::vector<T> out;
  out.reserve(f.dim());
  for (const auto& c : f.components()) out.push_back(c.evaluate(x));
  return out;
}

template <class T>
std::vector<T> eval_at(const PolyVectorField& f, const std::vector<T>& x) {
  return eval_at(f, std::span<const T>(x));
}

template <class T>
T pairing(std::span<const T> lambda, std::span<const T> v) {
  if (lambda.size() != v.size()) throw domain_error("pairing dimension mismatch");
  T sum = T(0);
  for (std::size_t i = 0; i < v.size(); ++i) sum += lambda[i] * v[i];
  return sum;
}

template <class T>
T pairing(const std::vector<T>& lambda, const std::vector<T>& v) {
  return pairing(std::span<const T>(lambda), std::span<const T>(v));
}

}  // namespace fuller
