#pragma once

#include "fuller/extremal.hpp"
#include "fuller/real.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fuller {

/// Finite sample of a switching set.
struct SwitchSet {
  RealVector times;
  real horizon = 0;
  /// Smallest separation the producer can resolve.
  real resolution = 0;
};

/// Sorts nothing; throws domain_error unless times are strictly increasing inside [0, horizon].
SwitchSet make_switch_set(RealVector times, const real& horizon, const real& resolution);

struct StripResult {
  RealVector isolated;
  RealVector residual;
};

/// A point is isolated when its nearest neighbour in `sorted` lies farther than eps.
StripResult strip_isolated(const RealVector& sorted, const real& eps);

enum class ClusterPoint { supremum, centroid };

struct OrderOptions {
  ClusterPoint representative = ClusterPoint::supremum;
  /// Scale used at stripping level k is eps * level_growth^k.
  double level_growth = 4.0;
};

/// A residual chain collapsed into one representative for the next stripping level.
struct AccumulationCluster {
  std::size_t level = 0;
  real point;
  real first;
  real last;
  std::size_t members = 0;
};

struct OrderReport {
  std::vector<RealVector> layers;
  int estimated_order = 0;
  RealVector accumulation_points;
  std::vector<AccumulationCluster> clusters;
  real epsilon_used;
  double level_growth = 4.0;
};

/// Iterated stripping. Non-isolated points are grouped into chains (consecutive gaps <= eps_k),
/// each chain is replaced by its representative, and stripping continues on the representatives.
/// Layer k holds the input points whose representative was isolated at level k; the estimated
/// order is the index of the last nonempty layer.
OrderReport fuller_order(const SwitchSet& set, const real& eps, const OrderOptions& opts = {});

/// Gap-distribution heuristic: splits the log gaps into two groups by maximal between-group
/// variance and returns the geometric mean of the two group geometric means. When the group
/// means differ by less than a factor 4 the data is treated as unimodal and half the smallest
/// gap is returned.
real auto_epsilon(const RealVector& sorted);

struct ChatterRatio {
  double ratio = 0.0;
  /// Standard deviation of the log interval ratios.
  double dispersion = 0.0;
  std::size_t intervals = 0;
};

/// Requires at least five times.
ChatterRatio chatter_ratio(const RealVector& times);

/// t_{i+1} = t_i (1 - c t_i), returning t_1..t_N.
std::vector<double> recursion_simulate(double t1, double c, std::size_t n);

/// First 1-based index whose partial sum reaches M.
std::optional<std::size_t> divergence_check(const std::vector<double>& seq, double m);

struct LogFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
};

/// Least squares S_N = a ln N + b over partial sums with n_lo <= N <= n_hi (1-based).
LogFit fit_log_growth(const std::vector<double>& seq, std::size_t n_lo, std::size_t n_hi);

struct AccumulationViolation {
  real t;
  std::string quantity;
  double value = 0.0;
  double scale = 0.0;
};

/// At each accumulation point compares |h1|, |h01| and min(|h+01|, |h-01|) at the nearest
/// simulated state with tol times the largest magnitude of the same quantity over the cluster's
/// time span. Junctions between two singular arcs must also have h101 and h001 negligible.
std::vector<AccumulationViolation> check_accumulation_conditions(const SimResult& result, const OrderReport& report,
                                                                 BracketCache& cache, double tol);

}  // namespace fuller
