#include "fuller/extremal.hpp"

#include "fuller/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace fuller {

namespace {

const BracketWord& word_0() {
  static const BracketWord w("0");
  return w;
}
const BracketWord& word_1() {
  static const BracketWord w("1");
  return w;
}
const BracketWord& word_01() {
  static const BracketWord w("01");
  return w;
}
const BracketWord& word_001() {
  static const BracketWord w("001");
  return w;
}
const BracketWord& word_101() {
  static const BracketWord w("101");
  return w;
}

int sign_of(const real& x) {
  return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

/// Numeric views of the brackets the simulator needs, over the packed state y = (q, lambda).
class Dynamics {
 public:
  explicit Dynamics(BracketCache& cache)
      : n_(cache.dim()),
        f0_(&cache.numeric(word_0())),
        f1_(&cache.numeric(word_1())),
        f01_(&cache.numeric(word_01())),
        f001_(&cache.numeric(word_001())),
        f101_(&cache.numeric(word_101())) {}

  std::size_t dim() const { return n_; }

  void rhs(std::span<const real> y, std::span<real> dy, const real& u) const {
    std::fill(dy.begin(), dy.end(), real(0));
    auto q = y.first(n_), lam = y.subspan(n_, n_);
    auto qd = dy.first(n_), ld = dy.subspan(n_, n_);
    f0_->accumulate(q, lam, real(1), qd, ld);
    if (u != 0) f1_->accumulate(q, lam, u, qd, ld);
    for (auto& v : ld) v = -v;
  }

  real h(const NumericField<real>& f, std::span<const real> y) const { return f.paired(y.first(n_), y.subspan(n_, n_)); }
  real h0(std::span<const real> y) const { return h(*f0_, y); }
  real h1(std::span<const real> y) const { return h(*f1_, y); }
  real h01(std::span<const real> y) const { return h(*f01_, y); }
  real h001(std::span<const real> y) const { return h(*f001_, y); }
  real h101(std::span<const real> y) const { return h(*f101_, y); }

  /// -h001/h101 without clamping; callers check h101 first.
  real singular_u(std::span<const real> y) const { return -h001(y) / h101(y); }

  real hamiltonian(std::span<const real> y) const { return h0(y) + abs(h1(y)); }

 private:
  std::size_t n_;
  const NumericField<real>* f0_;
  const NumericField<real>* f1_;
  const NumericField<real>* f01_;
  const NumericField<real>* f001_;
  const NumericField<real>* f101_;
};

RealVector pack(const ExtremalState& s) {
  RealVector y = s.q;
  y.insert(y.end(), s.lambda.begin(), s.lambda.end());
  return y;
}

ExtremalState unpack(const real& t, std::span<const real> y, std::size_t n) {
  ExtremalState s;
  s.t = t;
  s.q.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  s.lambda.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
  return s;
}

real covector_norm(std::span<const real> y, std::size_t n) {
  real s = 0;
  for (std::size_t i = n; i < 2 * n; ++i) s += y[i] * y[i];
  return sqrt(s);
}

void check_state(const ExtremalState& s, std::size_t n) {
  if (s.q.size() != n || s.lambda.size() != n) throw domain_error("state dimension does not match the scenario");
}

class Simulator {
 public:
  Simulator(BracketCache& cache, const SimOptions& opts, std::string name)
      : dyn_(cache), opts_(opts), n_(cache.dim()) {
    result_.scenario = std::move(name);
  }

  SimResult run(const ExtremalState& init, const real& t_final) {
    check_state(init, n_);
    y_ = pack(init);
    t_ = init.t;
    t_final_ = t_final;
    if (!(t_final > t_)) throw domain_error("t_final must exceed the initial time");
    if (covector_norm(y_, n_) == 0) throw domain_error("initial covector must be nonzero");
    max_step_ = opts_.max_step > 0 ? real(opts_.max_step) : (t_final - t_) / 16;
    hamiltonian_ref_ = dyn_.hamiltonian(y_);

    auto kind = initial_kind();
    if (!kind) {
      result_.diagnostics.termination = "degenerate-singular";
      result_.events.push_back({t_, "terminate", "degenerate-singular"});
      result_.final_state = unpack(t_, y_, n_);
      return result_;
    }
    open_arc(*kind);

    real h = std::min(max_step_, (t_final - t_) / 100);
    const real min_step = real(opts_.time_tol);
    while (true) {
      if (t_ >= t_final_) {
        finish("t_final");
        break;
      }
      if (h > t_final_ - t_) h = t_final_ - t_;
      const ArcKind current = arc_.kind;
      RhsFunction rhs = make_rhs(current);
      RkStepResult step = dopri5_step(rhs, y_, h, opts_.rtol, opts_.atol);
      if (step.error_norm > 1.0) {
        ++result_.diagnostics.steps_rejected;
        h *= dopri5_step_factor(step.error_norm);
        if (h < min_step) throw domain_error("step size underflow at t = " + format_real(t_, 20));
        continue;
      }
      ++result_.diagnostics.steps_accepted;
      real next_h = h * dopri5_step_factor(step.error_norm);
      std::optional<Event> ev =
          current == ArcKind::singular ? scan_singular(rhs, h, step.y) : scan_bang(rhs, h, step.y);
      if (!ev) {
        y_ = std::move(step.y);
        t_ = (h == t_final_ - t_) ? t_final_ : t_ + h;
        post_step();
        record_sample();
        h = std::min(next_h, max_step_);
        continue;
      }
      y_ = std::move(ev->y);
      t_ = t_ + ev->tau;
      post_step();
      record_sample();
      if (handle_event(*ev)) break;
      h = std::min({next_h, max_step_, real(last_arc_duration_ / 10)});
    }
    return result_;
  }

 private:
  enum class EventType { bang_crossing, sign_correction, singular_exit };
  struct Event {
    EventType type;
    real tau;
    RealVector y;
  };

  RhsFunction make_rhs(ArcKind kind) const {
    if (kind == ArcKind::singular) {
      return [this](std::span<const real> y, std::span<real> dy) {
        real h101 = dyn_.h101(y);
        real u = h101 != 0 ? real(-dyn_.h001(y) / h101) : real(0);
        if (u > 1) u = 1;
        if (u < -1) u = -1;
        dyn_.rhs(y, dy, u);
      };
    }
    const real u = arc_sign(kind);
    return [this, u](std::span<const real> y, std::span<real> dy) { dyn_.rhs(y, dy, u); };
  }

  real control_at(std::span<const real> y) const {
    if (arc_.kind != ArcKind::singular) return real(arc_sign(arc_.kind));
    real h101 = dyn_.h101(y);
    if (h101 == 0) return 0;
    real u = -dyn_.h001(y) / h101;
    return u > 1 ? real(1) : (u < -1 ? real(-1) : u);
  }

  std::optional<ArcKind> initial_kind() {
    const real h1 = dyn_.h1(y_), h01 = dyn_.h01(y_);
    if (abs(h1) > opts_.eps1) {
      armed_ = true;
      return bang_kind(sign_of(h1));
    }
    if (abs(h01) > opts_.eps2) {
      armed_ = true;
      return bang_kind(sign_of(h01));
    }
    const real h101 = dyn_.h101(y_);
    if (abs(h101) <= opts_.eps3) return std::nullopt;
    const real u = -dyn_.h001(y_) / h101;
    if (abs(u) <= 1) return ArcKind::singular;
    armed_ = false;
    return bang_kind(sign_of(u));
  }

  RealVector substep(const RhsFunction& rhs, const real& tau, const real& h, const RealVector& y_end) const {
    if (tau == h) return y_end;
    return dopri5_step(rhs, y_, tau, opts_.rtol, opts_.atol, false).y;
  }

  std::optional<Event> scan_bang(const RhsFunction& rhs, const real& h, const RealVector& y_end) {
    const int s = arc_sign(arc_.kind);
    const std::size_t m = std::max<std::size_t>(1, opts_.event_samples);
    real prev_tau = 0;
    for (std::size_t k = 1; k <= m; ++k) {
      const real tau = k == m ? h : real(h * k / m);
      RealVector yk = substep(rhs, tau, h, y_end);
      const real phi = s * dyn_.h1(yk);
      if (!armed_) {
        if (phi >= 0) {
          armed_ = true;
        } else if (phi < -opts_.eps1) {
          return Event{EventType::sign_correction, tau, std::move(yk)};
        }
        prev_tau = tau;
        continue;
      }
      if (phi < 0) {
        auto crossed = [&](const real& t) { return s * dyn_.h1(substep(rhs, t, h, y_end)) < 0; };
        SwitchLocation loc = locate_transition(crossed, prev_tau, tau, real(opts_.time_tol));
        return Event{EventType::bang_crossing, loc.time, substep(rhs, loc.time, h, y_end)};
      }
      prev_tau = tau;
    }
    return std::nullopt;
  }

  bool singular_violated(std::span<const real> y) const {
    const real h101 = dyn_.h101(y);
    if (abs(h101) <= opts_.eps3) return true;
    return abs(dyn_.h001(y) / h101) > 1;
  }

  std::optional<Event> scan_singular(const RhsFunction& rhs, const real& h, const RealVector& y_end) {
    const std::size_t m = std::max<std::size_t>(1, opts_.event_samples);
    real prev_tau = 0;
    for (std::size_t k = 1; k <= m; ++k) {
      const real tau = k == m ? h : real(h * k / m);
      if (singular_violated(substep(rhs, tau, h, y_end))) {
        auto crossed = [&](const real& t) { return singular_violated(substep(rhs, t, h, y_end)); };
        SwitchLocation loc = locate_transition(crossed, prev_tau, tau, real(opts_.time_tol));
        return Event{EventType::singular_exit, loc.time, substep(rhs, loc.time, h, y_end)};
      }
      prev_tau = tau;
    }
    return std::nullopt;
  }

  /// Returns true when the run terminates.
  bool handle_event(const Event& ev) {
    switch (ev.type) {
      case EventType::sign_correction:
        return commit(bang_kind(-arc_sign(arc_.kind)), "switch", "sign correction after singular exit");
      case EventType::singular_exit: {
        const real h101 = dyn_.h101(y_);
        if (abs(h101) <= opts_.eps3) {
          finish("degenerate-singular");
          return true;
        }
        return commit(bang_kind(sign_of(-dyn_.h001(y_) / h101)), "singular_exit", "control reached the bound");
      }
      case EventType::bang_crossing:
        break;
    }
    const int s = arc_sign(arc_.kind);
    const real h01 = abs(dyn_.h01(y_));
    if (h01 > h01_scale_) h01_scale_ = h01;
    if (h01_scale_ > 0 && h01 > opts_.eps2 * h01_scale_) return commit(bang_kind(-s), "switch", "transversal");
    const real h101 = dyn_.h101(y_);
    if (abs(h101) <= opts_.eps3) {
      finish("degenerate-singular");
      return true;
    }
    if (abs(dyn_.h001(y_) / h101) <= 1) return commit(ArcKind::singular, "singular_entry", "tangential crossing");
    return commit(bang_kind(-s), "switch", "non-transversal, singular control inadmissible");
  }

  void open_arc(ArcKind kind) {
    arc_ = ArcSegment{};
    arc_.kind = kind;
    arc_.t_start = t_;
    h01_scale_ = abs(dyn_.h01(y_));
    if (kind != ArcKind::singular) armed_ = arc_sign(kind) * dyn_.h1(y_) >= 0;
    record_sample();
  }

  void record_sample() {
    arc_.samples.push_back(unpack(t_, y_, n_));
    arc_.controls.push_back(control_at(y_));
  }

  bool commit(ArcKind next, const std::string& kind, const std::string& detail) {
    arc_.t_end = t_;
    last_arc_duration_ = arc_.t_end - arc_.t_start;
    result_.arcs.push_back(std::move(arc_));
    result_.switch_times.push_back(t_);
    result_.events.push_back({t_, kind, detail + " -> " + to_string(next)});
    ++event_count_;
    open_arc(next);
    if (event_count_ >= opts_.max_events) {
      finish("max_events");
      return true;
    }
    if (accumulating()) {
      finish("accumulation");
      return true;
    }
    return false;
  }

  bool accumulating() const {
    const std::size_t w = opts_.accumulation_window;
    const auto& st = result_.switch_times;
    if (w == 0 || st.size() < w + 2) return false;
    for (std::size_t k = st.size() - w; k < st.size(); ++k) {
      const real d = st[k] - st[k - 1], prev = st[k - 1] - st[k - 2];
      if (!(d <= opts_.accumulation_factor * prev)) return false;
    }
    return true;
  }

  void finish(const std::string& reason) {
    arc_.t_end = t_;
    if (arc_.t_end > arc_.t_start) {
      result_.arcs.push_back(std::move(arc_));
    } else if (!result_.switch_times.empty() && result_.switch_times.back() == t_) {
      result_.switch_times.pop_back();
    }
    result_.diagnostics.termination = reason;
    result_.events.push_back({t_, "terminate", reason});
    result_.final_state = unpack(t_, y_, n_);
  }

  void post_step() {
    const real nrm = covector_norm(y_, n_);
    if (!(nrm > 0) || !boost::multiprecision::isfinite(nrm))
      throw domain_error("covector vanished or diverged at t = " + format_real(t_, 20));
    if (nrm < opts_.lambda_min || nrm > opts_.lambda_max) {
      for (std::size_t i = n_; i < 2 * n_; ++i) y_[i] /= nrm;
      hamiltonian_ref_ /= nrm;
      h01_scale_ /= nrm;
      ++result_.diagnostics.renormalizations;
      result_.events.push_back({t_, "renormalize", "|lambda| = " + format_real(nrm, 8)});
    }
    const double drift = static_cast<double>(abs(dyn_.hamiltonian(y_) - hamiltonian_ref_));
    result_.diagnostics.max_hamiltonian_drift = std::max(result_.diagnostics.max_hamiltonian_drift, drift);
    const real h01 = abs(dyn_.h01(y_));
    if (h01 > h01_scale_) h01_scale_ = h01;
  }

  Dynamics dyn_;
  SimOptions opts_;
  std::size_t n_;
  SimResult result_;
  RealVector y_;
  real t_, t_final_, max_step_;
  real hamiltonian_ref_;
  ArcSegment arc_;
  real h01_scale_ = 0;
  real last_arc_duration_ = 0;
  bool armed_ = true;
  std::size_t event_count_ = 0;
};

}  // namespace

void validate_scenario(const Scenario& s) {
  if (s.f0.dim() == 0) throw domain_error("scenario dimension must be positive");
  if (s.f0.dim() != s.f1.dim()) throw domain_error("scenario fields f0 and f1 have different dimensions");
}

std::string to_string(ArcKind kind) {
  switch (kind) {
    case ArcKind::bang_plus:
      return "bang+";
    case ArcKind::bang_minus:
      return "bang-";
    case ArcKind::singular:
      return "singular";
  }
  return "?";
}

int arc_sign(ArcKind kind) {
  return kind == ArcKind::bang_plus ? 1 : (kind == ArcKind::bang_minus ? -1 : 0);
}

ArcKind bang_kind(int sign) {
  return sign >= 0 ? ArcKind::bang_plus : ArcKind::bang_minus;
}

real h_word(const ExtremalState& state, const BracketWord& word, BracketCache& cache) {
  check_state(state, cache.dim());
  return cache.numeric(word).paired(state.q, state.lambda);
}

ExtremalDerivative extremal_rhs(const ExtremalState& state, const real& u, BracketCache& cache) {
  check_state(state, cache.dim());
  if (abs(u) > 1) throw domain_error("extremal_rhs: control outside [-1,1]");
  Dynamics dyn(cache);
  RealVector y = pack(state), dy(y.size());
  dyn.rhs(y, dy, u);
  const auto n = static_cast<std::ptrdiff_t>(cache.dim());
  return {RealVector(dy.begin(), dy.begin() + n), RealVector(dy.begin() + n, dy.end())};
}

ControlDecision pmp_control(const ExtremalState& state, BracketCache& cache, double tol) {
  const real h1 = h_word(state, word_1(), cache);
  if (abs(h1) > tol) return {ControlKind::bang, sign_of(h1)};
  const real h01 = h_word(state, word_01(), cache);
  if (abs(h01) <= tol) return {ControlKind::singular_candidate, 0};
  throw ambiguous_control_error("h1 vanishes while h01 = " + format_real(h01, 12) +
                                ": transversal switch, not a singular arc");
}

real singular_control(const ExtremalState& state, BracketCache& cache, double tol) {
  const real h101 = h_word(state, word_101(), cache);
  if (abs(h101) <= tol) throw degenerate_singular_error("h101 vanishes: degenerate singular configuration");
  real u = -h_word(state, word_001(), cache) / h101;
  if (abs(u) > 1 + real(tol)) throw inadmissible_singular_error("singular control " + format_real(u, 12) +
                                                               " outside the admissible range");
  if (u > 1) u = 1;
  if (u < -1) u = -1;
  return u;
}

ExtremalDerivative singular_hamiltonian_rhs(const ExtremalState& state, BracketCache& cache, double tol) {
  return extremal_rhs(state, singular_control(state, cache, tol), cache);
}

real maximized_hamiltonian(const ExtremalState& state, BracketCache& cache) {
  return h_word(state, word_0(), cache) + abs(h_word(state, word_1(), cache));
}

SwitchLocation locate_transition(const std::function<bool(const real&)>& crossed, const real& t_a, const real& t_b,
                                 const real& time_tol) {
  SwitchLocation loc;
  loc.left = t_a;
  loc.right = t_b;
  while (loc.right - loc.left > time_tol) {
    const real mid = (loc.left + loc.right) / 2;
    if (!(mid > loc.left && mid < loc.right)) break;
    (crossed(mid) ? loc.right : loc.left) = mid;
    ++loc.iterations;
  }
  loc.time = loc.right;
  return loc;
}

SwitchLocation locate_switch(const std::function<real(const real&)>& g, const real& t_a, const real& t_b,
                             const real& time_tol) {
  if (!(t_b > t_a)) throw domain_error("locate_switch: empty bracket");
  const bool left_negative = g(t_a) < 0;
  if ((g(t_b) < 0) == left_negative) throw domain_error("locate_switch: no sign change in bracket");
  return locate_transition([&](const real& t) { return (g(t) < 0) != left_negative; }, t_a, t_b, time_tol);
}

ExtremalState propagate(const ExtremalState& state, const real& u, const real& duration, BracketCache& cache,
                        double rtol, double atol) {
  check_state(state, cache.dim());
  Dynamics dyn(cache);
  RhsFunction rhs = [&](std::span<const real> y, std::span<real> dy) { dyn.rhs(y, dy, u); };
  RealVector y = integrate_adaptive(rhs, pack(state), duration, rtol, atol, duration / 8);
  return unpack(state.t + duration, y, cache.dim());
}

SimResult simulate(const Scenario& scenario, const ExtremalState& init, const real& t_final, const SimOptions& opts) {
  validate_scenario(scenario);
  BracketCache cache(scenario.f0, scenario.f1);
  Simulator sim(cache, opts, scenario.name);
  return sim.run(init, t_final);
}

std::vector<ArcViolation> check_arc_invariants(const SimResult& result, BracketCache& cache, double tol) {
  std::vector<ArcViolation> out;
  const real rtol = tol;
  for (std::size_t a = 0; a < result.arcs.size(); ++a) {
    const ArcSegment& arc = result.arcs[a];
    if (!(arc.t_start < arc.t_end)) out.push_back({a, arc.t_start, "empty-arc", 0.0});
    if (a + 1 < result.arcs.size() && result.arcs[a + 1].t_start != arc.t_end)
      out.push_back({a, arc.t_end, "arcs-not-consecutive", 0.0});
    const int s = arc_sign(arc.kind);
    for (std::size_t k = 0; k < arc.samples.size(); ++k) {
      const ExtremalState& st = arc.samples[k];
      const real u = k < arc.controls.size() ? arc.controls[k] : real(0);
      const real h1 = h_word(st, word_1(), cache);
      if (s != 0) {
        if (u != s) out.push_back({a, st.t, "bang-control", static_cast<double>(u)});
        const bool interior = st.t - arc.t_start > rtol && arc.t_end - st.t > rtol;
        if (interior && s * h1 < -rtol) out.push_back({a, st.t, "bang-sign", static_cast<double>(h1)});
        continue;
      }
      const real h01 = h_word(st, word_01(), cache);
      const real residual = h_word(st, word_001(), cache) + u * h_word(st, word_101(), cache);
      if (abs(h1) > rtol) out.push_back({a, st.t, "singular-h1", static_cast<double>(h1)});
      if (abs(h01) > rtol) out.push_back({a, st.t, "singular-h01", static_cast<double>(h01)});
      if (abs(residual) > rtol) out.push_back({a, st.t, "singular-identity", static_cast<double>(residual)});
      if (abs(u) > 1) out.push_back({a, st.t, "singular-control-range", static_cast<double>(u)});
    }
  }
  for (std::size_t k = 0; k + 1 < result.arcs.size(); ++k)
    if (k >= result.switch_times.size() || result.switch_times[k] != result.arcs[k].t_end)
      out.push_back({k, result.arcs[k].t_end, "switch-time-mismatch", 0.0});
  return out;
}

std::vector<CollinearityEntry> collinearity_report(const SimResult& result, BracketCache& cache, double tol,
                                                   double window) {
  struct Sample {
    const ExtremalState* state;
    real u;
  };
  std::vector<Sample> samples;
  for (const auto& arc : result.arcs)
    for (std::size_t k = 0; k < arc.samples.size(); ++k)
      samples.push_back({&arc.samples[k], k < arc.controls.size() ? arc.controls[k] : real(0)});

  const auto& f0 = cache.numeric(word_0());
  const auto& f1 = cache.numeric(word_1());
  std::vector<CollinearityEntry> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ExtremalState& st = *samples[i].state;
    const RealVector a = f0.value(st.q), b = f1.value(st.q);
    real aa = 0, bb = 0, ab = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      aa += a[j] * a[j];
      bb += b[j] * b[j];
      ab += a[j] * b[j];
    }
    const real wedge2 = std::max(real(aa * bb - ab * ab), real(0));
    const real t2 = real(tol) * real(tol);
    const bool flagged = aa <= t2 || bb <= t2 || wedge2 <= t2 * aa * bb;
    if (!flagged) continue;

    real u_bar = samples[i].u;
    if (window > 0 && i > 0) {
      const real start = st.t - real(window);
      real weighted = 0, span = 0;
      for (std::size_t k = i; k > 0; --k) {
        const real hi = samples[k].state->t, lo = std::max(samples[k - 1].state->t, start);
        if (hi <= start) break;
        if (hi > lo) {
          weighted += samples[k].u * (hi - lo);
          span += hi - lo;
        }
      }
      if (span > 0) u_bar = weighted / span;
    }
    real res2 = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const real r = a[j] + u_bar * b[j];
      res2 += r * r;
    }
    out.push_back({st.t, st.q, static_cast<double>(u_bar), static_cast<double>(sqrt(res2))});
  }
  return out;
}

}  // namespace fuller
