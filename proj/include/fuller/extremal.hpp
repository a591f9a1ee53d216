#pragma once

#include "fuller/bracket_cache.hpp"
#include "fuller/real.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fuller {

/// Control-affine system q' = f0(q) + u f1(q), |u| <= 1.
struct Scenario {
  std::string name;
  PolyVectorField f0, f1;
  /// Builtin fixture tag, empty for user scenarios.
  std::string fixture;

  std::size_t dim() const { return f0.dim(); }
};

/// Throws domain_error when f0 and f1 do not share a positive dimension.
void validate_scenario(const Scenario& s);

struct ExtremalState {
  real t = 0;
  RealVector q;
  RealVector lambda;
};

enum class ArcKind { bang_plus, bang_minus, singular };

std::string to_string(ArcKind kind);
int arc_sign(ArcKind kind);
ArcKind bang_kind(int sign);

struct ArcSegment {
  ArcKind kind = ArcKind::bang_plus;
  real t_start = 0, t_end = 0;
  std::vector<ExtremalState> samples;
  RealVector controls;
};

struct EventRecord {
  real t;
  std::string kind;
  std::string detail;
};

struct SimDiagnostics {
  double max_hamiltonian_drift = 0.0;
  std::size_t renormalizations = 0;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  std::string termination;
};

struct SimResult {
  std::string scenario;
  std::vector<ArcSegment> arcs;
  RealVector switch_times;
  std::vector<EventRecord> events;
  SimDiagnostics diagnostics;
  ExtremalState final_state;
};

struct SimOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  /// Bracket width at which event bisection stops, measured in time from the step start.
  double time_tol = 1e-14;
  double refine_tol = 1e-9;
  double eps1 = 1e-8;
  double eps2 = 1e-8;
  double eps3 = 1e-6;
  /// Tolerance for singular-arc identities and the admissible control range.
  double arc_tol = 1e-6;
  std::size_t max_events = 10000;
  /// Number of consecutive shrinking inter-switch intervals that triggers "accumulation"; 0 disables.
  std::size_t accumulation_window = 10;
  double accumulation_factor = 0.9;
  double lambda_min = 0.5;
  double lambda_max = 2.0;
  /// Largest step; zero selects a sixteenth of the horizon.
  double max_step = 0.0;
  /// Interior sign samples per accepted step on bang arcs.
  std::size_t event_samples = 4;
};

/// h_I = <lambda, f_I(q)>.
real h_word(const ExtremalState& state, const BracketWord& word, BracketCache& cache);

struct ExtremalDerivative {
  RealVector qdot;
  RealVector lambda_dot;
};

/// q' = f0 + u f1, lambda' = -(D(f0 + u f1))^T lambda.
ExtremalDerivative extremal_rhs(const ExtremalState& state, const real& u, BracketCache& cache);

/// Thrown by pmp_control when h1 vanishes but h01 does not: a transversal switch is imminent.
class ambiguous_control_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Thrown by singular_control when |h101| is within tolerance of zero.
class degenerate_singular_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Thrown by singular_control when -h001/h101 leaves [-1-tol, 1+tol].
class inadmissible_singular_error : public domain_error {
 public:
  using domain_error::domain_error;
};

enum class ControlKind { bang, singular_candidate };

struct ControlDecision {
  ControlKind kind;
  int sign = 0;
};

ControlDecision pmp_control(const ExtremalState& state, BracketCache& cache, double tol);

/// -h001/h101, clamped to [-1,1] once inside [-1-tol, 1+tol].
real singular_control(const ExtremalState& state, BracketCache& cache, double tol);

/// Hamiltonian field of the singular feedback Hamiltonian, evaluated as extremal_rhs
/// with u = singular_control(state).
ExtremalDerivative singular_hamiltonian_rhs(const ExtremalState& state, BracketCache& cache, double tol);

/// Maximized Hamiltonian <lambda, f0> + |<lambda, f1>|.
real maximized_hamiltonian(const ExtremalState& state, BracketCache& cache);

struct SwitchLocation {
  /// First point past the crossing (the right end of the final bracket).
  real time;
  real left;
  real right;
  std::size_t iterations = 0;
};

/// Bisection for a sign change of g on [t_a, t_b]. Stops when the bracket is narrower
/// than time_tol or can no longer be split. Throws domain_error when g(t_a) and g(t_b)
/// lie on the same side of zero.
SwitchLocation locate_switch(const std::function<real(const real&)>& g, const real& t_a, const real& t_b,
                             const real& time_tol);

/// Bisection on a predicate with crossed(t_a) false and crossed(t_b) true.
SwitchLocation locate_transition(const std::function<bool(const real&)>& crossed, const real& t_a, const real& t_b,
                                 const real& time_tol);

/// Forward integration with a fixed control value.
ExtremalState propagate(const ExtremalState& state, const real& u, const real& duration, BracketCache& cache,
                        double rtol, double atol);

SimResult simulate(const Scenario& scenario, const ExtremalState& init, const real& t_final,
                   const SimOptions& opts = {});

struct ArcViolation {
  std::size_t arc = 0;
  real t;
  std::string kind;
  double value = 0.0;
};

std::vector<ArcViolation> check_arc_invariants(const SimResult& result, BracketCache& cache, double tol);

struct CollinearityEntry {
  real t;
  RealVector q;
  double u_bar = 0.0;
  double residual = 0.0;
};

/// Samples where f0(q) and f1(q) are parallel within tol (sine of the angle, or a vanishing
/// vector). u_bar is the time average of u over the trailing window; window <= 0 uses the
/// instantaneous control.
std::vector<CollinearityEntry> collinearity_report(const SimResult& result, BracketCache& cache, double tol,
                                                   double window);

}  // namespace fuller
