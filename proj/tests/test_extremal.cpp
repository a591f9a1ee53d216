#include "fuller/extremal.hpp"
#include "fuller/integrator.hpp"
#include "fuller/scenario_io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include <cmath>

using namespace fuller;
using fuller::test::Rng;

namespace {

ExtremalState state(std::vector<double> q, std::vector<double> lambda, double t = 0) {
  ExtremalState s;
  s.t = t;
  for (double x : q) s.q.push_back(real(x));
  for (double x : lambda) s.lambda.push_back(real(x));
  return s;
}

SimResult run_builtin(const std::string& name, std::uint64_t seed = 0) {
  const ScenarioFile file = builtin(name, seed);
  return simulate(file.scenario, initial_state(file), to_real(*file.t_final), make_options(file.options));
}

/// Central-difference error of d/dt h_I against h_(0I) + u h_(1I) at the midpoint of a
/// forward step of length 2 delta.
real fd_error(const ExtremalState& s0, const BracketWord& w, int u, const real& delta, BracketCache& cache) {
  const double tol = 1e-24;
  const ExtremalState mid = propagate(s0, real(u), delta, cache, tol, tol);
  const ExtremalState end = propagate(s0, real(u), 2 * delta, cache, tol, tol);
  const real fd = (h_word(end, w, cache) - h_word(s0, w, cache)) / (2 * delta);
  const real exact = h_word(mid, w.prepend(Letter::zero), cache) + u * h_word(mid, w.prepend(Letter::one), cache);
  return abs(fd - exact);
}

}  // namespace

TEST_CASE("double integrator switching functions by hand") {
  const ScenarioFile di = builtin("double_integrator");
  BracketCache cache(di.scenario.f0, di.scenario.f1);
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    ExtremalState s;
    s.q = fuller::test::to_reals(rng.point(2));
    s.lambda = fuller::test::to_reals(rng.point(2));
    CHECK(h_word(s, BracketWord("1"), cache) == s.lambda[1]);
    CHECK(h_word(s, BracketWord("01"), cache) == -s.lambda[0]);
    CHECK(h_word(s, BracketWord("0"), cache) == s.lambda[0] * s.q[1]);
    const auto d = extremal_rhs(s, real(-1), cache);
    CHECK(d.qdot == RealVector{s.q[1], real(-1)});
    CHECK(d.lambda_dot == RealVector{real(0), -s.lambda[0]});
    CHECK(maximized_hamiltonian(s, cache) == s.lambda[0] * s.q[1] + abs(s.lambda[1]));
  }
  CHECK_THROWS_AS(extremal_rhs(state({0, 0}, {1, 1}), real(2), cache), domain_error);
  CHECK_THROWS_AS(h_word(state({0, 0, 0}, {1, 1, 1}), BracketWord("1"), cache), domain_error);
}

TEST_CASE("pmp_control decisions") {
  const ScenarioFile di = builtin("double_integrator");
  BracketCache cache(di.scenario.f0, di.scenario.f1);
  auto d = pmp_control(state({0, 0}, {0, 0.5}), cache, 1e-9);
  CHECK(d.kind == ControlKind::bang);
  CHECK(d.sign == 1);
  d = pmp_control(state({0, 0}, {3, -2}), cache, 1e-9);
  CHECK(d.sign == -1);
  CHECK_THROWS_AS(pmp_control(state({0, 0}, {1, 0}), cache, 1e-9), ambiguous_control_error);
  d = pmp_control(state({0, 0}, {1e-12, 1e-12}), cache, 1e-9);
  CHECK(d.kind == ControlKind::singular_candidate);
}

TEST_CASE("singular_control on the singular3d fields") {
  const ScenarioFile s3 = builtin("singular3d");
  BracketCache cache(s3.scenario.f0, s3.scenario.f1);
  // f0 = (x2, x3, 0), f1 = (0, 1, x2) gives f101 = (0, -1, 2 x2).
  CHECK(cache.field(BracketWord("101")) ==
        PolyVectorField({Polynomial(3), Polynomial::constant(3, -1), Polynomial::variable(3, 1) * Rational(2)}));
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = rng.point(3), lam = rng.point(3);
    const Rational h101 = pairing(lam, eval_at<Rational>(cache.field(BracketWord("101")), q));
    const Rational h001 = pairing(lam, eval_at<Rational>(cache.field(BracketWord("001")), q));
    ExtremalState s;
    s.q = fuller::test::to_reals(q);
    s.lambda = fuller::test::to_reals(lam);
    if (h101 == 0) {
      CHECK_THROWS_AS(singular_control(s, cache, 1e-12), degenerate_singular_error);
      continue;
    }
    const Rational u = -h001 / h101;
    if (abs(u) > 1) {
      CHECK_THROWS_AS(singular_control(s, cache, 1e-12), inadmissible_singular_error);
    } else {
      CHECK(abs(singular_control(s, cache, 1e-12) - to_real(u)) < real("1e-120"));
      const auto d = singular_hamiltonian_rhs(s, cache, 1e-12);
      const auto e = extremal_rhs(s, to_real(u), cache);
      for (std::size_t i = 0; i < 3; ++i) CHECK(abs(d.qdot[i] - e.qdot[i]) < real("1e-120"));
    }
  }
}

TEST_CASE("locate_switch converges to the sign change") {
  const real tol("1e-30");
  const auto loc = locate_switch([](const real& t) { return t - real("0.5"); }, real(0), real(1), tol);
  CHECK(abs(loc.time - real("0.5")) <= tol);
  CHECK(loc.right - loc.left <= tol);
  CHECK(loc.left < real("0.5"));
  CHECK(loc.right >= real("0.5"));
  CHECK(loc.iterations <= static_cast<std::size_t>(std::ceil(std::log2(1e30))) + 1);
  CHECK_THROWS_AS(locate_switch([](const real& t) { return t + 1; }, real(0), real(1), tol), domain_error);
  CHECK_THROWS_AS(locate_switch([](const real& t) { return t; }, real(1), real(0), tol), domain_error);
}

TEST_CASE("double integrator switches at one half") {
  const SimResult r = run_builtin("double_integrator");
  REQUIRE(r.switch_times.size() == 1);
  CHECK(abs(r.switch_times[0] - real("0.5")) < real("1e-9"));
  REQUIRE(r.arcs.size() == 2);
  CHECK(r.arcs[0].kind == ArcKind::bang_minus);
  CHECK(r.arcs[1].kind == ArcKind::bang_plus);
  CHECK(r.diagnostics.max_hamiltonian_drift <= 1e-8);
  CHECK(r.final_state.t == 1);
  // Exact solution: x2(t) = -t up to 1/2, then t - 1.
  CHECK(abs(r.final_state.q[1]) < real("1e-8"));
  CHECK(abs(r.final_state.q[0] - real("-0.25")) < real("1e-8"));
  const ScenarioFile di = builtin("double_integrator");
  BracketCache cache(di.scenario.f0, di.scenario.f1);
  CHECK(check_arc_invariants(r, cache, 1e-9).empty());
}

TEST_CASE("switching times are invariant under positive rescaling of the covector") {
  const ScenarioFile file = builtin("random_poly", 5);
  ExtremalState init = initial_state(file);
  const SimOptions opts = make_options(file.options);
  // The state of this fixture blows up shortly after t = 0.7; the first switchings suffice.
  const real horizon("0.6");
  const SimResult a = simulate(file.scenario, init, horizon, opts);
  REQUIRE(a.switch_times.size() >= 3);
  for (auto& l : init.lambda) l *= 3;
  const SimResult b = simulate(file.scenario, init, horizon, opts);
  REQUIRE(a.switch_times.size() == b.switch_times.size());
  for (std::size_t i = 0; i < a.switch_times.size(); ++i)
    CHECK(abs(a.switch_times[i] - b.switch_times[i]) < real("1e-9"));
  REQUIRE(a.arcs.size() == b.arcs.size());
  for (std::size_t i = 0; i < a.arcs.size(); ++i) CHECK(a.arcs[i].kind == b.arcs[i].kind);
}

TEST_CASE("derivative chain d/dt h_I = h_(0I) + u h_(1I) is second order under central differences") {
  const ScenarioFile file = builtin("random_poly", 3);
  BracketCache cache(file.scenario.f0, file.scenario.f1);
  const ExtremalState s0 = initial_state(file);
  for (std::size_t len = 1; len <= 2; ++len) {
    for (const auto& w : fuller::test::all_words(len)) {
      for (int u : {-1, 1}) {
        const real e1 = fd_error(s0, w, u, real("1e-3"), cache);
        const real e2 = fd_error(s0, w, u, real("5e-4"), cache);
        // Below the integration noise the truncation error vanishes (h_I at most quadratic in t).
        if (e1 < real("1e-16")) {
          CHECK(e2 < real("1e-16"));
          continue;
        }
        const double order = static_cast<double>(log2(e1 / e2));
        INFO("word " << w.str() << " u " << u);
        CHECK(order >= 1.9);
      }
    }
  }
}

TEST_CASE("singular3d sustains a singular arc") {
  const SimResult r = run_builtin("singular3d");
  const ScenarioFile s3 = builtin("singular3d");
  BracketCache cache(s3.scenario.f0, s3.scenario.f1);
  real singular_time = 0;
  for (const auto& arc : r.arcs) {
    if (arc.kind != ArcKind::singular) continue;
    singular_time += arc.t_end - arc.t_start;
    for (std::size_t k = 0; k < arc.samples.size(); ++k) {
      const auto& st = arc.samples[k];
      CHECK(h_word(st, BracketWord("101"), cache) >= real("-1e-9"));
      // h101 = <lambda, (0, -1, 2 x2)> symbolically.
      CHECK(abs(h_word(st, BracketWord("101"), cache) - (2 * st.q[1] * st.lambda[2] - st.lambda[1])) <
            real("1e-100"));
    }
  }
  CHECK(singular_time >= real("0.2"));
  CHECK(check_arc_invariants(r, cache, 1e-6).empty());
}

TEST_CASE("check_arc_invariants flags a corrupted sample") {
  SimResult r = run_builtin("singular3d");
  const ScenarioFile s3 = builtin("singular3d");
  BracketCache cache(s3.scenario.f0, s3.scenario.f1);
  ArcSegment* singular = nullptr;
  for (auto& arc : r.arcs)
    if (arc.kind == ArcKind::singular && arc.samples.size() > 2) singular = &arc;
  REQUIRE(singular != nullptr);
  singular->samples[1].lambda[1] += real("0.01");
  const auto violations = check_arc_invariants(r, cache, 1e-6);
  REQUIRE_FALSE(violations.empty());
  bool h1_flagged = false;
  for (const auto& v : violations) h1_flagged = h1_flagged || v.kind == "singular-h1";
  CHECK(h1_flagged);

  SimResult di = run_builtin("double_integrator");
  BracketCache dcache(builtin("double_integrator").scenario.f0, builtin("double_integrator").scenario.f1);
  di.arcs[0].controls[0] = real(1);
  CHECK_FALSE(check_arc_invariants(di, dcache, 1e-9).empty());
}

TEST_CASE("collinearity report on a line of collinear points") {
  // f0 = (1/2 - x1, -x2), f1 = (1, 0): collinear exactly on x2 = 0.
  Scenario sc;
  sc.name = "collinear";
  const Polynomial x1 = Polynomial::variable(2, 0), x2 = Polynomial::variable(2, 1);
  sc.f0 = PolyVectorField({Polynomial::constant(2, Rational(1, 2)) - x1, -x2});
  sc.f1 = PolyVectorField::constant({Rational(1), Rational(0)});
  BracketCache cache(sc.f0, sc.f1);

  const SimResult on_line = simulate(sc, state({0, 0}, {-1, 0.25}), real(1));
  const auto report = collinearity_report(on_line, cache, 1e-9, 0.1);
  std::size_t samples = 0;
  for (const auto& arc : on_line.arcs) samples += arc.samples.size();
  CHECK(report.size() == samples);
  for (const auto& e : report) {
    CHECK(e.u_bar == doctest::Approx(-1.0));
    CHECK(e.residual == doctest::Approx(std::abs(static_cast<double>(e.q[0]) + 0.5)).epsilon(1e-9));
  }

  const SimResult off_line = simulate(sc, state({0, 1}, {-1, 0.25}), real(1));
  CHECK(collinearity_report(off_line, cache, 1e-3, 0.1).empty());

  std::size_t previous = 0;
  for (double tol : {1e-6, 1e-2, 0.3, 0.6, 1.0}) {
    const auto n = collinearity_report(off_line, cache, tol, 0.0).size();
    CHECK(n >= previous);
    previous = n;
  }
}

TEST_CASE("Dormand-Prince steps are fifth order and the adaptive driver meets its tolerance") {
  // y' = y from y = 1: the local error of one step of size h is O(h^6).
  const RhsFunction growth = [](std::span<const real> y, std::span<real> dy) { dy[0] = y[0]; };
  const RealVector one{real(1)};
  const auto local_error = [&](const real& h) { return abs(dopri5_step(growth, one, h, 1e-10, 1e-10).y[0] - exp(h)); };
  const double order = static_cast<double>(log2(local_error(real("0.1")) / local_error(real("0.05"))));
  CHECK(order > 5.8);
  CHECK(order < 6.2);
  CHECK(dopri5_step(growth, one, real("0.1"), 1e-10, 1e-10, false).error_norm == 0.0);
  CHECK(dopri5_step(growth, one, real("0.1"), 1e-10, 1e-10).error_norm > 1.0);

  // Harmonic oscillator over one period.
  const RhsFunction rotate = [](std::span<const real> y, std::span<real> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  const real period = 2 * boost::math::constants::pi<real>();
  const RealVector end = integrate_adaptive(rotate, RealVector{real(1), real(0)}, period, 1e-12, 1e-12, real("0.1"));
  CHECK(abs(end[0] - 1) < real("1e-9"));
  CHECK(abs(end[1]) < real("1e-9"));
  CHECK_THROWS_AS(integrate_adaptive(rotate, RealVector{real(1), real(0)}, real(-1), 1e-12, 1e-12, real("0.1")),
                  domain_error);
}
