#include "fuller/bracket_cache.hpp"
#include "fuller/bracket_word.hpp"
#include "fuller/linalg.hpp"
#include "fuller/serialization.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace fuller;
using fuller::test::Rng;

namespace {

Polynomial x(std::size_t dim, std::size_t i) {
  return Polynomial::variable(dim, i);
}
Polynomial c(std::size_t dim, long v) {
  return Polynomial::constant(dim, Rational(v));
}

PolyVectorField di_f0() {
  return PolyVectorField({x(2, 1), c(2, 0)});
}
PolyVectorField di_f1() {
  return PolyVectorField({c(2, 0), c(2, 1)});
}

}  // namespace

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("1.25") == Rational(5, 4));
  CHECK(parse_rational("-1e-3") == Rational(-1, 1000));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK_THROWS_AS(parse_rational("1/0"), domain_error);
  CHECK_THROWS_AS(parse_rational("abc"), domain_error);
  CHECK_THROWS_AS(parse_rational(""), domain_error);
  CHECK(to_string(Rational(-3, 4)) == "-3/4");
  CHECK(to_string(Rational(5)) == "5");
  CHECK(parse_rational("-4/6") == Rational(-2, 3));
  CHECK(parse_rational("-4/6").get_den() == 3);
}

TEST_CASE("polynomial storage is canonical") {
  const auto p = Polynomial::from_terms(2, {{{1, 0}, Rational(2)}, {{0, 0}, Rational(1)}, {{1, 0}, Rational(-2)}});
  REQUIRE(p.terms().size() == 1);
  CHECK(p.terms()[0].exponents == Exponents{0, 0});
  const auto q = Polynomial::from_terms(2, {{{0, 2}, 1}, {{1, 0}, 1}, {{2, 0}, 1}, {{0, 0}, 1}});
  for (std::size_t i = 1; i < q.terms().size(); ++i) CHECK(grlex_less(q.terms()[i - 1].exponents, q.terms()[i].exponents));
  CHECK_THROWS_AS(Polynomial::from_terms(2, {{{1}, 1}}), domain_error);
}

TEST_CASE("polynomial arithmetic agrees with pointwise evaluation") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto a = rng.polynomial(n, 3), b = rng.polynomial(n, 2);
    const auto pt = rng.point(n);
    const std::span<const Rational> s(pt);
    CHECK((a * b).evaluate(s) == a.evaluate(s) * b.evaluate(s));
    CHECK((a + b).evaluate(s) == a.evaluate(s) + b.evaluate(s));
    CHECK((a - b).evaluate(s) == a.evaluate(s) - b.evaluate(s));
    CHECK((a * Rational(3, 7)).evaluate(s) == a.evaluate(s) * Rational(3, 7));
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("polynomial derivative by hand") {
  // p = 3 x^3 y - y^2 + 5
  const auto p = Polynomial::from_terms(2, {{{3, 1}, 3}, {{0, 2}, -1}, {{0, 0}, 5}});
  CHECK(p.derivative(0) == Polynomial::from_terms(2, {{{2, 1}, 9}}));
  CHECK(p.derivative(1) == Polynomial::from_terms(2, {{{3, 0}, 3}, {{0, 1}, -2}}));
  CHECK(p.degree() == 4);
  CHECK(p.coefficient({3, 1}) == 3);
  CHECK(p.coefficient({1, 1}) == 0);
}

TEST_CASE("lie bracket hand examples") {
  CHECK(lie_bracket(di_f0(), di_f1()) == PolyVectorField({c(2, -1), c(2, 0)}));
  const auto f = di_f0();
  CHECK(lie_bracket(f, f).is_zero());
  // f = (x1^2, 0), g = (0, x1): [f,g] = (0, x1^2).
  const PolyVectorField ff({x(2, 0) * x(2, 0), c(2, 0)});
  const PolyVectorField gg({c(2, 0), x(2, 0)});
  CHECK(lie_bracket(ff, gg) == PolyVectorField({c(2, 0), x(2, 0) * x(2, 0)}));
  CHECK_THROWS_AS(lie_bracket(ff, PolyVectorField({c(3, 0), c(3, 0), c(3, 0)})), domain_error);
}

TEST_CASE("lie bracket acts as the commutator of derivations") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto f = rng.field(n, 2), g = rng.field(n, 2);
    const auto p = rng.polynomial(n, 3);
    CHECK(lie_bracket(f, g).apply(p) == f.apply(g.apply(p)) - g.apply(f.apply(p)));
  }
}

TEST_CASE("antisymmetry, Jacobi and Leibniz on random fields") {
  Rng rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto f = rng.field(n, 3, 2), g = rng.field(n, 3, 2), h = rng.field(n, 2, 3);
    CHECK((lie_bracket(f, g) + lie_bracket(g, f)).is_zero());
    const auto jac = lie_bracket(f, lie_bracket(g, h)) + lie_bracket(g, lie_bracket(h, f)) +
                     lie_bracket(h, lie_bracket(f, g));
    CHECK(jac.is_zero());
    const auto p = rng.polynomial(n, 2);
    CHECK(lie_bracket(f, p * g) == f.apply(p) * g + p * lie_bracket(f, g));
  }
}

TEST_CASE("ad_power matches repeated brackets") {
  Rng rng(14);
  const auto g = rng.field(3, 2), h = rng.field(3, 2);
  CHECK(ad_power(g, h, 0) == h);
  CHECK(ad_power(g, h, 1) == lie_bracket(g, h));
  CHECK(ad_power(g, h, 3) == lie_bracket(g, lie_bracket(g, lie_bracket(g, h))));
}

TEST_CASE("bracket words parse, order and evaluate") {
  CHECK(BracketWord("+01").str() == "+01");
  CHECK(BracketWord("\xE2\x88\x92" "01").str() == "-01");
  CHECK_THROWS_AS(BracketWord(""), domain_error);
  CHECK_THROWS_AS(BracketWord("0x1"), domain_error);
  CHECK(BracketWord("0") < BracketWord("1"));
  CHECK(BracketWord("1") < BracketWord("+"));
  CHECK(BracketWord("+") < BracketWord("-"));
  CHECK(BracketWord("01").prepend(Letter::plus) == BracketWord("+01"));
  CHECK(BracketWord("+01").tail() == BracketWord("01"));
  CHECK(BracketWord("0").concat(BracketWord("11")) == BracketWord("011"));

  const auto f0 = di_f0(), f1 = di_f1();
  CHECK(eval_word_field(BracketWord("1"), f0, f1) == f1);
  CHECK(eval_word_field(BracketWord("01"), f0, f1) == PolyVectorField({c(2, -1), c(2, 0)}));

  Rng rng(15);
  const auto g0 = rng.field(3, 2), g1 = rng.field(3, 2);
  CHECK(eval_word_field(BracketWord("+01"), g0, g1) ==
        eval_word_field(BracketWord("001"), g0, g1) + eval_word_field(BracketWord("101"), g0, g1));
  CHECK(eval_word_field(BracketWord("-1"), g0, g1) == lie_bracket(g0 - g1, g1));
}

TEST_CASE("decompose_word examples and soundness") {
  const auto d01 = decompose_word(BracketWord("01"));
  REQUIRE(d01.terms.size() == 1);
  CHECK(d01.terms[0].word == BracketWord("01"));
  CHECK(d01.terms[0].sign == 1);

  const auto dp = decompose_word(BracketWord("+01"));
  REQUIRE(dp.terms.size() == 2);
  CHECK(dp.terms[0].word == BracketWord("001"));
  CHECK(dp.terms[0].sign == 1);
  CHECK(dp.terms[1].word == BracketWord("101"));
  CHECK(dp.terms[1].sign == 1);
  CHECK(dp.terms[dp.j1].word == BracketWord("001"));
  CHECK(dp.terms[dp.j2].word == BracketWord("101"));

  const auto dm = decompose_word(BracketWord("-01"));
  REQUIRE(dm.terms.size() == 2);
  CHECK(dm.terms[0].sign == 1);
  CHECK(dm.terms[1].word == BracketWord("101"));
  CHECK(dm.terms[1].sign == -1);

  CHECK_THROWS_AS(decompose_word(BracketWord("+10")), domain_error);

  Rng rng(16);
  const auto f0 = rng.field(2, 2), f1 = rng.field(2, 2);
  for (const auto& prefix : fuller::test::all_words(2)) {
    const BracketWord w = prefix.concat(BracketWord("01"));
    const auto d = decompose_word(w);
    PolyVectorField sum = PolyVectorField::zero(2);
    for (const auto& t : d.terms) {
      sum += eval_word_field(t.word, f0, f1) * Rational(t.sign);
      CHECK(t.word.is_binary());
    }
    CHECK(sum == eval_word_field(w, f0, f1));
    for (std::size_t i = 0; i < d.terms.size(); ++i) {
      if (i != d.j1) CHECK(d.terms[i].word.count(Letter::zero) < d.terms[d.j1].word.count(Letter::zero));
      if (i != d.j2) CHECK(d.terms[i].word.count(Letter::one) < d.terms[d.j2].word.count(Letter::one));
      for (std::size_t j = i + 1; j < d.terms.size(); ++j) CHECK(d.terms[i].word != d.terms[j].word);
    }
  }
}

TEST_CASE("wedge determinant") {
  using V = std::vector<Rational>;
  CHECK(wedge_det<Rational>({V{1, 2, 3}, V{1, 2, 3}, V{0, 1, 5}}) == 0);
  CHECK(wedge_det<Rational>({V{1, 0, 0}, V{0, 1, 0}, V{0, 0, 1}}) == 1);
  CHECK(wedge_det<Rational>({V{0, 1, 0}, V{1, 0, 0}, V{0, 0, 1}}) == -1);
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 5;
    std::vector<V> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(rng.point(n, 6, 5));
    CHECK(wedge_det(vs) == fuller::test::cofactor_det(vs));
  }
  CHECK_THROWS_AS(wedge_det<Rational>({V{1, 2}, V{3, 4}, V{5, 6}}), domain_error);
  CHECK(std::abs(wedge_det<double>({{2.0, 0.0}, {1.0, 3.0}}) - 6.0) < 1e-14);
}

TEST_CASE("exact rank matches the minor oracle") {
  Rng rng(18);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + trial % 4, cols = 1 + (trial / 4) % 4;
    std::vector<std::vector<Rational>> m;
    for (std::size_t i = 0; i < rows; ++i) m.push_back(rng.point(cols, 2, 1));
    if (rows >= 2 && trial % 3 == 0) {
      // Force a dependency.
      for (std::size_t j = 0; j < cols; ++j) m[rows - 1][j] = m[0][j] * 2 - (rows > 2 ? m[1][j] : Rational(0));
    }
    CHECK(rank(m) == fuller::test::minor_rank(m));
  }
}

TEST_CASE("pairing and evaluation") {
  using V = std::vector<Rational>;
  CHECK(pairing(V{1, 0}, V{-1, 0}) == -1);
  CHECK(pairing(V{0, 0}, V{3, 4}) == 0);
  CHECK_THROWS_AS(pairing(V{1}, V{1, 2}), domain_error);
  CHECK(eval_at<Rational>(di_f0(), V{3, 5}) == V{5, 0});
  CHECK(eval_at<Rational>(PolyVectorField::zero(2), V{3, 5}) == V{0, 0});

  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = rng.field(3, 3);
    const auto pt = rng.point(3);
    const auto lam = rng.point(3);
    const auto s = rng.rational();
    const auto exact = eval_at<Rational>(f, pt);
    CHECK(pairing(lam, exact) * s == pairing(std::vector<Rational>{lam[0] * s, lam[1] * s, lam[2] * s}, exact));
    std::vector<double> ptd;
    for (const auto& v : pt) ptd.push_back(v.get_d());
    const auto approx = eval_at<double>(f, ptd);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(std::abs(approx[i] - exact[i].get_d()) <= 1e-12 * std::max(1.0, std::abs(exact[i].get_d())));
  }
}

TEST_CASE("bracket cache is coherent with fresh recomputation") {
  Rng rng(20);
  const auto f0 = rng.field(3, 2), f1 = rng.field(3, 2);
  BracketCache cache(f0, f1);
  for (std::size_t len = 1; len <= 3; ++len) {
    for (const auto& w : fuller::test::all_words(len)) {
      CHECK(cache.field(w) == eval_word_field(w, f0, f1));
      const auto pt = rng.point(3);
      const auto lam = rng.point(3);
      const real numeric = cache.numeric(w).paired(fuller::test::to_reals(pt), fuller::test::to_reals(lam));
      const Rational exact = pairing(lam, eval_at<Rational>(cache.field(w), pt));
      CHECK(abs(numeric - to_real(exact)) < real("1e-100"));
    }
  }
  CHECK(cache.field(BracketWord("+01")) == eval_word_field(BracketWord("+01"), f0, f1));
}

TEST_CASE("field serialization round-trips and reports paths") {
  Rng rng(21);
  const auto f = rng.field(3, 3);
  const auto j = field_to_json(f);
  CHECK(field_from_json(j, 3, "f0") == f);
  auto bad = j;
  bad[1] = nlohmann::json::array({{{"exponents", {0, 0, 0}}, {"coeff", "1/0"}}});
  try {
    field_from_json(bad, 3, "f0");
    FAIL("expected an error");
  } catch (const domain_error& e) {
    CHECK(std::string(e.what()).find("f0[1][0].coeff") != std::string::npos);
  }
  CHECK_THROWS_AS(field_from_json(j, 2, "f0"), domain_error);
}
