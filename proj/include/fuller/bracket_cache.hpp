#pragma once

#include "fuller/bracket_word.hpp"
#include "fuller/real.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace fuller {

/// Polynomial compiled for repeated floating evaluation against a shared power table.
template <class T>
class NumericPolynomial {
 public:
  NumericPolynomial() = default;
  explicit NumericPolynomial(const Polynomial& p) {
    for (const auto& term : p.terms()) {
      Term t;
      t.coeff = from_rational<T>(term.coeff);
      for (std::size_t i = 0; i < term.exponents.size(); ++i)
        if (term.exponents[i] > 0) t.factors.emplace_back(i, term.exponents[i]);
      terms_.push_back(std::move(t));
    }
  }

  /// powers[i][e] must hold x_i^e.
  T operator()(const std::vector<std::vector<T>>& powers) const {
    T sum = T(0);
    for (const auto& t : terms_) {
      T v = t.coeff;
      for (const auto& [i, e] : t.factors) v *= powers[i][e];
      sum += v;
    }
    return sum;
  }

  bool is_zero() const { return terms_.empty(); }

 private:
  struct Term {
    T coeff;
    std::vector<std::pair<std::size_t, unsigned>> factors;
  };
  std::vector<Term> terms_;
};

/// Vector field compiled for floating evaluation together with its Jacobian.
template <class T>
class NumericField {
 public:
  NumericField() = default;
  explicit NumericField(const PolyVectorField& f) : dim_(f.dim()), degree_(f.degree()) {
    for (std::size_t i = 0; i < dim_; ++i) {
      components_.emplace_back(f[i]);
      for (std::size_t j = 0; j < dim_; ++j) jacobian_.emplace_back(f[i].derivative(j));
    }
  }

  std::size_t dim() const { return dim_; }

  std::vector<std::vector<T>> power_table(std::span<const T> x) const {
    std::vector<std::vector<T>> powers(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      powers[i].resize(degree_ + 1);
      powers[i][0] = T(1);
      for (unsigned e = 1; e <= degree_; ++e) powers[i][e] = powers[i][e - 1] * x[i];
    }
    return powers;
  }

  std::vector<T> value(std::span<const T> x) const {
    auto powers = power_table(x);
    std::vector<T> out;
    out.reserve(dim_);
    for (const auto& c : components_) out.push_back(c(powers));
    return out;
  }

  /// <lambda, f(x)>.
  T paired(std::span<const T> x, std::span<const T> lambda) const {
    auto powers = power_table(x);
    T sum = T(0);
    for (std::size_t i = 0; i < dim_; ++i)
      if (!components_[i].is_zero()) sum += lambda[i] * components_[i](powers);
    return sum;
  }

  /// Adds scale * (f(x), Df(x)^T lambda) into (value_out, covector_out).
  void accumulate(std::span<const T> x, std::span<const T> lambda, const T& scale, std::span<T> value_out,
                  std::span<T> covector_out) const {
    auto powers = power_table(x);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!components_[i].is_zero()) value_out[i] += scale * components_[i](powers);
      for (std::size_t j = 0; j < dim_; ++j) {
        const auto& d = jacobian_[i * dim_ + j];
        if (!d.is_zero()) covector_out[j] += scale * lambda[i] * d(powers);
      }
    }
  }

 private:
  std::size_t dim_ = 0;
  unsigned degree_ = 0;
  std::vector<NumericPolynomial<T>> components_;
  std::vector<NumericPolynomial<T>> jacobian_;  // row-major: d_j f^i at i*dim+j
};

/// Memo of bracket fields f_I for a fixed pair (f0, f1). Not thread safe.
class BracketCache {
 public:
  BracketCache(PolyVectorField f0, PolyVectorField f1);

  const PolyVectorField& f0() const { return f0_; }
  const PolyVectorField& f1() const { return f1_; }
  std::size_t dim() const { return f0_.dim(); }

  const PolyVectorField& field(const BracketWord& word);
  const NumericField<real>& numeric(const BracketWord& word);
  std::size_t size() const { return fields_.size(); }

 private:
  PolyVectorField f0_, f1_;
  std::map<std::string, PolyVectorField> fields_;
  std::map<std::string, NumericField<real>> numeric_;
};

}  // namespace fuller
