#include "fuller/integrator.hpp"

#include "fuller/rational.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include <algorithm>
#include <cmath>

namespace fuller {

RkStepResult dopri5_step(const RhsFunction& f, std::span<const real> y, const real& h, double rtol, double atol,
                         bool with_error) {
  using Stepper = boost::numeric::odeint::runge_kutta_dopri5<RealVector, real, RealVector, real>;
  const auto system = [&f](const RealVector& x, RealVector& dxdt, const real&) { f(x, dxdt); };
  const std::size_t n = y.size();
  const RealVector in(y.begin(), y.end());
  RealVector dxdt_in(n), dxdt_out(n), err(n);
  f(in, dxdt_in);
  RkStepResult out;
  out.y.resize(n);
  // The explicit-derivative overload keeps the stepper free of first-same-as-last state between calls.
  Stepper stepper;
  if (!with_error) {
    stepper.do_step(system, in, dxdt_in, real(0), out.y, dxdt_out, h);
    return out;
  }
  stepper.do_step(system, in, dxdt_in, real(0), out.y, dxdt_out, h, err);
  real sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const real scale = real(atol) + real(rtol) * std::max(abs(in[i]), abs(out.y[i]));
    const real ratio = err[i] / scale;
    sum += ratio * ratio;
  }
  out.error_norm = static_cast<double>(sqrt(sum / real(n)));
  return out;
}

double dopri5_step_factor(double error_norm) {
  if (!(error_norm > 0.0)) return 5.0;
  return std::clamp(0.9 * std::pow(error_norm, -0.2), 0.2, 5.0);
}

RealVector integrate_adaptive(const RhsFunction& f, RealVector y, const real& duration, double rtol, double atol,
                              const real& initial_step) {
  if (duration < 0) throw domain_error("integrate_adaptive: backward integration is not supported");
  real t = 0, h = initial_step > 0 ? initial_step : duration;
  while (t < duration) {
    if (h > duration - t) h = duration - t;
    RkStepResult step = dopri5_step(f, y, h, rtol, atol);
    if (step.error_norm > 1.0) {
      h *= dopri5_step_factor(step.error_norm);
      if (h <= duration * real(1e-100)) throw domain_error("integrate_adaptive: step size underflow");
      continue;
    }
    t += h;
    y = std::move(step.y);
    h *= dopri5_step_factor(step.error_norm);
  }
  return y;
}

}  // namespace fuller
