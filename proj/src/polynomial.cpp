#include "fuller/polynomial.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace fuller {

namespace {

unsigned total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

struct GrlexCompare {
  bool operator()(const Exponents& a, const Exponents& b) const { return grlex_less(a, b); }
};

using TermMap = std::map<Exponents, Rational, GrlexCompare>;

Polynomial from_map(std::size_t dim, const TermMap& map) {
  std::vector<Monomial> terms;
  terms.reserve(map.size());
  for (const auto& [e, c] : map)
    if (c != 0) terms.push_back({e, c});
  return Polynomial::from_terms(dim, std::move(terms));
}

}  // namespace

bool grlex_less(const Exponents& a, const Exponents& b) {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polynomial Polynomial::from_terms(std::size_t dim, std::vector<Monomial> terms) {
  for (const auto& t : terms)
    if (t.exponents.size() != dim) throw domain_error("monomial exponent length does not match dimension");
  std::sort(terms.begin(), terms.end(),
            [](const Monomial& a, const Monomial& b) { return grlex_less(a.exponents, b.exponents); });
  Polynomial p(dim);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().exponents == t.exponents) {
      p.terms_.back().coeff += t.coeff;
      if (p.terms_.back().coeff == 0) p.terms_.pop_back();
    } else if (t.coeff != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Polynomial Polynomial::constant(std::size_t dim, const Rational& c) {
  return from_terms(dim, {{Exponents(dim, 0), c}});
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t i) {
  if (i >= dim) throw domain_error("variable index out of range");
  Exponents e(dim, 0);
  e[i] = 1;
  return from_terms(dim, {{e, Rational(1)}});
}

Polynomial Polynomial::monomial(std::size_t dim, Exponents exponents, const Rational& c) {
  return from_terms(dim, {{std::move(exponents), c}});
}

unsigned Polynomial::degree() const {
  return terms_.empty() ? 0 : total_degree(terms_.back().exponents);
}

Rational Polynomial::coefficient(const Exponents& e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Monomial& m, const Exponents& key) { return grlex_less(m.exponents, key); });
  if (it != terms_.end() && it->exponents == e) return it->coeff;
  return Rational(0);
}

Polynomial Polynomial::derivative(std::size_t i) const {
  if (i >= dim_) throw domain_error("derivative index out of range");
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (t.exponents[i] == 0) continue;
    Monomial m = t;
    m.coeff *= t.exponents[i];
    m.exponents[i] -= 1;
    out.push_back(std::move(m));
  }
  return from_terms(dim_, std::move(out));
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.dim_ != dim_) throw domain_error("polynomial dimension mismatch");
  std::vector<Monomial> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.cbegin();
  auto b = other.terms_.cbegin();
  while (a != terms_.cend() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.cend() && grlex_less(a->exponents, b->exponents))) {
      merged.push_back(*a++);
    } else if (a == terms_.cend() || grlex_less(b->exponents, a->exponents)) {
      merged.push_back(*b++);
    } else {
      Rational c = a->coeff + b->coeff;
      if (c != 0) merged.push_back({a->exponents, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  return *this += -other;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim() != b.dim()) throw domain_error("polynomial dimension mismatch");
  TermMap acc;
  for (const auto& s : a.terms()) {
    for (const auto& t : b.terms()) {
      Exponents e(a.dim());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.exponents[i] + t.exponents[i];
      acc[e] += s.coeff * t.coeff;
    }
  }
  return from_map(a.dim(), acc);
}

}  // namespace fuller
