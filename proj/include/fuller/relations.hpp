#pragma once

#include "fuller/bracket_cache.hpp"
#include "fuller/bracket_word.hpp"
#include "fuller/rational.hpp"
#include "fuller/real.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fuller {

/// Sorted multiset of simple-relation leaves; the empty monomial is the constant 1.
using RelationMonomial = std::vector<BracketWord>;

/// Integer polynomial in the simple relations S_I, stored in canonical expanded form.
/// Monomials are sorted leaf multisets (leaf order 0 < 1 < + < -, lexicographic), so equal
/// polynomials have identical term maps.
class RelationExpr {
 public:
  RelationExpr() = default;

  static RelationExpr leaf(const BracketWord& word);
  static RelationExpr leaf(std::string_view word) { return leaf(BracketWord(word)); }
  static RelationExpr constant(const mpz_class& c);

  const std::map<RelationMonomial, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of the monomial with the given leaves (any order).
  mpz_class coefficient(RelationMonomial leaves) const;
  /// Largest number of leaves in a monomial.
  std::size_t degree() const;
  /// True when some monomial contains the leaf.
  bool mentions(const BracketWord& word) const;
  /// Every monomial that contains the leaf.
  std::vector<RelationMonomial> monomials_with(const BracketWord& word) const;

  /// Text such as "S[01]*S[1] - S[1]^2*S[001]".
  std::string str() const;

  RelationExpr& operator+=(const RelationExpr& other);
  RelationExpr& operator-=(const RelationExpr& other);
  RelationExpr& operator*=(const mpz_class& c);
  RelationExpr operator-() const;

  friend RelationExpr operator+(RelationExpr a, const RelationExpr& b) { return a += b; }
  friend RelationExpr operator-(RelationExpr a, const RelationExpr& b) { return a -= b; }
  friend RelationExpr operator*(RelationExpr a, const mpz_class& c) { return a *= c; }
  friend RelationExpr operator*(const mpz_class& c, RelationExpr a) { return a *= c; }
  friend RelationExpr operator*(const RelationExpr& a, const RelationExpr& b);

  bool operator==(const RelationExpr&) const = default;

 private:
  void add_term(RelationMonomial m, const mpz_class& c);
  std::map<RelationMonomial, mpz_class> terms_;
};

/// {S_I, S_J} = S_(IJ), extended by bilinearity and the Leibniz rule on both sides.
RelationExpr poisson(const RelationExpr& a, const RelationExpr& b);

/// Q_1 = det[[{S0,S_Il}, {S1,S_Il}], [{S0,S_Il-1}, {S1,S_Il-1}]] and
/// Q_r = det[[{S0,S_Il}, {S1,S_Il}], [{S0,Q_r-1}, {S1,Q_r-1}]].
RelationExpr build_Q(unsigned r, const BracketWord& prev, const BracketWord& last);

/// Evaluates the polynomial with each leaf replaced by leaf_value(word); each leaf is queried once.
template <class T>
T eval_relation(const RelationExpr& r, const std::function<T(const BracketWord&)>& leaf_value) {
  std::map<BracketWord, T> memo;
  T sum = T(0);
  for (const auto& [mono, coeff] : r.terms()) {
    T term = from_rational<T>(Rational(coeff));
    for (const auto& w : mono) {
      auto it = memo.find(w);
      if (it == memo.end()) it = memo.emplace(w, leaf_value(w)).first;
      term *= it->second;
    }
    sum += term;
  }
  return sum;
}

/// Exact evaluation with S_I = <lambda, f_I(q)> at rational (lambda, q).
Rational eval_relation(const RelationExpr& r, const std::vector<Rational>& lambda, const std::vector<Rational>& q,
                       BracketCache& cache);

/// Floating evaluation at working precision.
real eval_relation(const RelationExpr& r, const RealVector& lambda, const RealVector& q, BracketCache& cache);

enum class AccumulationPhase {
  /// Simple relations grow one at a time by prefixing a sign letter.
  jets,
  /// A pair (0 I_j, 1 I_j) of simple relations is tracked together with polynomial relations Q_1..Q_h.
  codim,
};

enum class CurveStep { f0, f1, f2 };

std::string to_string(AccumulationPhase phase);
std::string to_string(CurveStep step);

/// Relation bookkeeping along nested accumulation points.
struct AccumulationState {
  /// Words of the vanishing simple relations, in creation order.
  std::vector<BracketWord> simple;
  /// Number h of vanishing polynomial relations Q_1..Q_h.
  std::size_t polynomial = 0;
  AccumulationPhase phase = AccumulationPhase::jets;
  /// Jets phase: (I_l-1, I_l) with I_l = (s I_l-1) for a sign letter s.
  /// Codim phase: (I_l-1, I_l) = (0 I_j, 1 I_j).
  BracketWord prev{"01"};
  BracketWord last{"+01"};
};

/// Relations {S_1, S_01, S_+01} with I_l = (+01), the starting point at a non-isolated switching time.
AccumulationState initial_accumulation_state();

struct AccumulationBranch {
  AccumulationState next;
  CurveStep step;
  /// Simple relations added by this branch.
  std::vector<BracketWord> added;
  /// Codimension increment: 1 for f0 and f1, 2 for f2.
  unsigned codim_increment = 0;
  /// True when the polynomial relations are discarded.
  bool polynomial_reset = false;
};

/// Successor relation sets. Jets phase: three branches S_(s' I_l-1) (s' the opposite sign, moving
/// to the codim phase), S_(-I_l) and S_(+I_l). Codim phase: Q_(h+1) or the pair S_(0 I_l), S_(1 I_l).
/// Throws domain_error when the state is structurally inconsistent.
std::vector<AccumulationBranch> accumulation_branches(const AccumulationState& state);

}  // namespace fuller
