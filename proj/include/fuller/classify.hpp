#pragma once

#include "fuller/bracket_cache.hpp"
#include "fuller/extremal.hpp"
#include "fuller/rational.hpp"
#include "fuller/real.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fuller {

/// Default relative tolerance of the floating classifiers.
inline constexpr double kClassifyTol = 1e-9;

/// One wedge determinant f_a ^ f_b ^ f_c at the point.
struct WedgeValue {
  std::string label;
  double value = 0.0;
  /// Exact value as "p/q" in exact mode, decimal otherwise.
  std::string text;
  bool zero = false;
};

struct PointClass {
  /// Membership in A_1..A_6.
  std::array<bool, 6> a{};
  bool w = false;
  bool c = false;
  /// f1 ^ f+01 ^ f-01 style determinants, in the order listed by wedge_labels().
  std::vector<WedgeValue> wedges;
  std::size_t rank_f1_f01 = 0;
  std::size_t rank_f0_f1 = 0;
  bool exact = true;
  double tol = 0.0;

  const WedgeValue& wedge(const std::string& label) const;
};

/// Labels "1,01,+01" ... of the nine determinants evaluated by classify_point_3d.
const std::vector<std::string>& wedge_labels();

/// Exact classification at a rational point; requires three-dimensional fields.
PointClass classify_point_3d(BracketCache& cache, const std::vector<Rational>& q);

/// Floating classification. A determinant counts as zero when it is below tol times the larger
/// of the largest determinant at the point and the largest product of the three vector norms;
/// the two-frame tests compare the cross product with tol times the product of the norms.
PointClass classify_point_3d(BracketCache& cache, const RealVector& q, double tol = kClassifyTol);

struct CollinearTest {
  bool in_l1 = false;
  bool in_l2 = false;
  /// Proportionality factor with f0(q) = a f1(q), when f1(q) != 0 and the vectors are parallel.
  std::optional<Rational> a;
  /// det[f1, ad_g f1, ..., ad_g^(n-1) f1](q) with g = f0 + a f1, when a exists.
  std::optional<Rational> determinant;
};

/// Exact tests for the degenerate collinear jets: rank{f0, f1, f01}(q) <= 1, and f1(q) != 0,
/// f0(q) = a f1(q) with a vanishing ad-chain determinant.
CollinearTest collinear_degeneracy_test(BracketCache& cache, const std::vector<Rational>& q);

/// Floating variant; a is recovered by least squares and reported as the exact value of the working float.
CollinearTest collinear_degeneracy_test(BracketCache& cache, const RealVector& q, double tol = kClassifyTol);

/// <lambda, ad^j_{f0 + a f1}(f1)(q)> for j = 0..k+2, exact.
std::vector<Rational> collinear_order_chain(BracketCache& cache, const std::vector<Rational>& q, const Rational& a,
                                            const std::vector<Rational>& lambda, unsigned k);

enum class DesttBranch { h0101_zero, determinant_zero, none };

std::string to_string(DesttBranch b);

struct DesttReport {
  DesttBranch branch = DesttBranch::none;
  /// h_0101.
  double h0101 = 0.0;
  /// h_0001 h_1101 - h_0101^2.
  double combination = 0.0;
  std::string h0101_text;
  std::string combination_text;
};

/// Exact alternative test at rational (q, lambda) for three-dimensional fields.
DesttReport destt_test(BracketCache& cache, const std::vector<Rational>& q, const std::vector<Rational>& lambda);

/// Floating test; a residual counts as zero when below tol relative to the magnitudes of its terms.
DesttReport destt_test(const ExtremalState& state, BracketCache& cache, double tol = kClassifyTol);

}  // namespace fuller
