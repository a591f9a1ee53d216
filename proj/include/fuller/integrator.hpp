#pragma once

#include "fuller/real.hpp"

#include <functional>
#include <span>

namespace fuller {

/// Autonomous right-hand side dy = F(y).
using RhsFunction = std::function<void(std::span<const real> y, std::span<real> dy)>;

struct RkStepResult {
  RealVector y;
  /// Weighted RMS norm of the embedded error estimate; zero when not requested.
  double error_norm = 0.0;
};

/// One Dormand-Prince 5(4) step of size h (Boost.odeint stepper). With with_error = false the
/// embedded error norm is left at zero; this is also the dense-output evaluator used for event
/// location (a fresh step from the left endpoint).
RkStepResult dopri5_step(const RhsFunction& f, std::span<const real> y, const real& h, double rtol, double atol,
                         bool with_error = true);

/// Step-size multiplier for a given error norm, clamped to [0.2, 5].
double dopri5_step_factor(double error_norm);

/// Adaptive forward integration over the given duration.
RealVector integrate_adaptive(const RhsFunction& f, RealVector y, const real& duration, double rtol, double atol,
                              const real& initial_step);

}  // namespace fuller
