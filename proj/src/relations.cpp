#include "fuller/relations.hpp"

#include <algorithm>
#include <sstream>

namespace fuller {

RelationExpr RelationExpr::leaf(const BracketWord& word) {
  RelationExpr r;
  r.terms_.emplace(RelationMonomial{word}, mpz_class(1));
  return r;
}

RelationExpr RelationExpr::constant(const mpz_class& c) {
  RelationExpr r;
  if (c != 0) r.terms_.emplace(RelationMonomial{}, c);
  return r;
}

void RelationExpr::add_term(RelationMonomial m, const mpz_class& c) {
  if (c == 0) return;
  std::sort(m.begin(), m.end());
  auto [it, inserted] = terms_.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

mpz_class RelationExpr::coefficient(RelationMonomial leaves) const {
  std::sort(leaves.begin(), leaves.end());
  auto it = terms_.find(leaves);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

std::size_t RelationExpr::degree() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.size());
  return d;
}

bool RelationExpr::mentions(const BracketWord& word) const {
  return !monomials_with(word).empty();
}

std::vector<RelationMonomial> RelationExpr::monomials_with(const BracketWord& word) const {
  std::vector<RelationMonomial> out;
  for (const auto& [m, c] : terms_)
    if (std::find(m.begin(), m.end(), word) != m.end()) out.push_back(m);
  return out;
}

std::string RelationExpr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (mag != 1 || m.empty()) {
      os << mag.get_str();
      need_star = true;
    }
    for (std::size_t i = 0; i < m.size();) {
      std::size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      if (need_star) os << "*";
      os << "S[" << m[i].str() << "]";
      if (j - i > 1) os << "^" << (j - i);
      need_star = true;
      i = j;
    }
  }
  return os.str();
}

RelationExpr& RelationExpr::operator+=(const RelationExpr& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

RelationExpr& RelationExpr::operator-=(const RelationExpr& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

RelationExpr& RelationExpr::operator*=(const mpz_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

RelationExpr RelationExpr::operator-() const {
  RelationExpr r = *this;
  for (auto& [m, v] : r.terms_) v = -v;
  return r;
}

RelationExpr operator*(const RelationExpr& a, const RelationExpr& b) {
  RelationExpr out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      RelationMonomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(std::move(m), ca * cb);
    }
  }
  return out;
}

RelationExpr poisson(const RelationExpr& a, const RelationExpr& b) {
  RelationExpr out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      for (std::size_t i = 0; i < ma.size(); ++i) {
        for (std::size_t j = 0; j < mb.size(); ++j) {
          RelationExpr term = RelationExpr::constant(ca * cb);
          term = term * RelationExpr::leaf(ma[i].concat(mb[j]));
          RelationMonomial rest;
          for (std::size_t k = 0; k < ma.size(); ++k)
            if (k != i) rest.push_back(ma[k]);
          for (std::size_t k = 0; k < mb.size(); ++k)
            if (k != j) rest.push_back(mb[k]);
          for (const auto& w : rest) term = term * RelationExpr::leaf(w);
          out += term;
        }
      }
    }
  }
  return out;
}

RelationExpr build_Q(unsigned r, const BracketWord& prev, const BracketWord& last) {
  if (r < 1) throw domain_error("build_Q needs r >= 1");
  const RelationExpr s0 = RelationExpr::leaf("0");
  const RelationExpr s1 = RelationExpr::leaf("1");
  const RelationExpr top = RelationExpr::leaf(last);
  const RelationExpr a = poisson(s0, top);
  const RelationExpr b = poisson(s1, top);
  RelationExpr q = RelationExpr::leaf(prev);
  for (unsigned k = 1; k <= r; ++k) q = a * poisson(s1, q) - b * poisson(s0, q);
  return q;
}

Rational eval_relation(const RelationExpr& r, const std::vector<Rational>& lambda, const std::vector<Rational>& q,
                       BracketCache& cache) {
  if (lambda.size() != cache.dim() || q.size() != cache.dim())
    throw domain_error("eval_relation: point dimension does not match the fields");
  std::function<Rational(const BracketWord&)> leaf = [&](const BracketWord& w) {
    return pairing(lambda, eval_at<Rational>(cache.field(w), q));
  };
  return eval_relation<Rational>(r, leaf);
}

real eval_relation(const RelationExpr& r, const RealVector& lambda, const RealVector& q, BracketCache& cache) {
  if (lambda.size() != cache.dim() || q.size() != cache.dim())
    throw domain_error("eval_relation: point dimension does not match the fields");
  std::function<real(const BracketWord&)> leaf = [&](const BracketWord& w) {
    return cache.numeric(w).paired(q, lambda);
  };
  return eval_relation<real>(r, leaf);
}

std::string to_string(AccumulationPhase phase) {
  return phase == AccumulationPhase::jets ? "jets" : "codim";
}

std::string to_string(CurveStep step) {
  switch (step) {
    case CurveStep::f0:
      return "F0";
    case CurveStep::f1:
      return "F1";
    case CurveStep::f2:
      return "F2";
  }
  return "?";
}

AccumulationState initial_accumulation_state() {
  AccumulationState s;
  s.simple = {BracketWord("1"), BracketWord("01"), BracketWord("+01")};
  s.polynomial = 0;
  s.phase = AccumulationPhase::jets;
  s.prev = BracketWord("01");
  s.last = BracketWord("+01");
  return s;
}

namespace {

bool contains(const std::vector<BracketWord>& words, const BracketWord& w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

Letter opposite(Letter l) {
  return l == Letter::plus ? Letter::minus : Letter::plus;
}

void validate(const AccumulationState& s) {
  if (s.last.size() != s.prev.size() + 1 && s.phase == AccumulationPhase::jets)
    throw domain_error("accumulation state: jets phase needs I_l = (s I_l-1)");
  if (s.phase == AccumulationPhase::jets) {
    const Letter head = s.last[0];
    if ((head != Letter::plus && head != Letter::minus) || s.last.tail() != s.prev)
      throw domain_error("accumulation state: jets phase needs I_l = (+I_l-1) or (-I_l-1)");
    if (s.polynomial != 0) throw domain_error("accumulation state: polynomial relations before the codim phase");
  } else {
    if (s.prev.size() != s.last.size() || s.prev.size() < 2 || s.prev[0] != Letter::zero ||
        s.last[0] != Letter::one || s.prev.tail() != s.last.tail())
      throw domain_error("accumulation state: codim phase needs the pair (0 I_j, 1 I_j)");
  }
  if (s.simple.empty()) throw domain_error("accumulation state: no simple relations");
  if (s.phase == AccumulationPhase::jets && (!contains(s.simple, s.prev) || !contains(s.simple, s.last)))
    throw domain_error("accumulation state: tracked words are not among the simple relations");
}

}  // namespace

std::vector<AccumulationBranch> accumulation_branches(const AccumulationState& state) {
  validate(state);
  std::vector<AccumulationBranch> out;
  if (state.phase == AccumulationPhase::jets) {
    const Letter sign = state.last[0];
    {
      // Both signed brackets of I_l-1 vanish, so (0 I_l-1, 1 I_l-1) vanish as well.
      AccumulationBranch b;
      const BracketWord w = state.prev.prepend(opposite(sign));
      b.next = state;
      b.next.simple.push_back(w);
      b.next.phase = AccumulationPhase::codim;
      b.next.prev = state.prev.prepend(Letter::zero);
      b.next.last = state.prev.prepend(Letter::one);
      b.step = CurveStep::f0;
      b.added = {w};
      b.codim_increment = 1;
      out.push_back(std::move(b));
    }
    for (Letter s : {Letter::minus, Letter::plus}) {
      AccumulationBranch b;
      const BracketWord w = state.last.prepend(s);
      b.next = state;
      b.next.simple.push_back(w);
      b.next.prev = state.last;
      b.next.last = w;
      b.step = CurveStep::f0;
      b.added = {w};
      b.codim_increment = 1;
      out.push_back(std::move(b));
    }
  } else {
    {
      AccumulationBranch b;
      b.next = state;
      b.next.polynomial += 1;
      b.step = CurveStep::f1;
      b.codim_increment = 1;
      out.push_back(std::move(b));
    }
    {
      AccumulationBranch b;
      const BracketWord w0 = state.last.prepend(Letter::zero);
      const BracketWord w1 = state.last.prepend(Letter::one);
      b.next = state;
      b.next.simple.push_back(w0);
      b.next.simple.push_back(w1);
      b.next.polynomial = 0;
      b.next.prev = w0;
      b.next.last = w1;
      b.step = CurveStep::f2;
      b.added = {w0, w1};
      b.codim_increment = 2;
      b.polynomial_reset = true;
      out.push_back(std::move(b));
    }
  }
  return out;
}

}  // namespace fuller
