#include "fuller/vector_field.hpp"

#include <algorithm>

namespace fuller {

PolyVectorField::PolyVectorField(std::vector<Polynomial> components) : components_(std::move(components)) {
  for (const auto& c : components_)
    if (c.dim() != components_.size()) throw domain_error("vector field component dimension mismatch");
}

PolyVectorField PolyVectorField::zero(std::size_t dim) {
  return PolyVectorField(std::vector<Polynomial>(dim, Polynomial(dim)));
}

PolyVectorField PolyVectorField::constant(const std::vector<Rational>& value) {
  std::vector<Polynomial> comps;
  for (const auto& v : value) comps.push_back(Polynomial::constant(value.size(), v));
  return PolyVectorField(std::move(comps));
}

bool PolyVectorField::is_zero() const {
  return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

unsigned PolyVectorField::degree() const {
  unsigned d = 0;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

Polynomial PolyVectorField::apply(const Polynomial& p) const {
  if (p.dim() != dim()) throw domain_error("directional derivative dimension mismatch");
  Polynomial out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (components_[i].is_zero()) continue;
    Polynomial d = p.derivative(i);
    if (!d.is_zero()) out += components_[i] * d;
  }
  return out;
}

PolyVectorField PolyVectorField::operator-() const {
  PolyVectorField f = *this;
  for (auto& c : f.components_) c = -c;
  return f;
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& other) {
  if (other.dim() != dim()) throw domain_error("vector field dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) components_[i] += other.components_[i];
  return *this;
}

PolyVectorField& PolyVectorField::operator-=(const PolyVectorField& other) {
  if (other.dim() != dim()) throw domain_error("vector field dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) components_[i] -= other.components_[i];
  return *this;
}

PolyVectorField& PolyVectorField::operator*=(const Rational& c) {
  for (auto& comp : components_) comp *= c;
  return *this;
}

PolyVectorField operator*(const Polynomial& p, const PolyVectorField& f) {
  if (p.dim() != f.dim()) throw domain_error("vector field dimension mismatch");
  std::vector<Polynomial> comps;
  comps.reserve(f.dim());
  for (const auto& c : f.components()) comps.push_back(p * c);
  return PolyVectorField(std::move(comps));
}

PolyVectorField lie_bracket(const PolyVectorField& f, const PolyVectorField& g) {
  if (f.dim() != g.dim()) throw domain_error("lie_bracket: dimension mismatch");
  std::vector<Polynomial> comps;
  comps.reserve(f.dim());
  for (std::size_t j = 0; j < f.dim(); ++j) comps.push_back(f.apply(g[j]) - g.apply(f[j]));
  return PolyVectorField(std::move(comps));
}

PolyVectorField ad_power(const PolyVectorField& g, const PolyVectorField& h, unsigned k) {
  if (g.dim() != h.dim()) throw domain_error("ad_power: dimension mismatch");
  PolyVectorField out = h;
  for (unsigned i = 0; i < k; ++i) out = lie_bracket(g, out);
  return out;
}

}  // namespace fuller
