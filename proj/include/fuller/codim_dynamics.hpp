#pragma once

#include "fuller/relations.hpp"

#include <cstdint>
#include <vector>

namespace fuller {

/// Point of the bookkeeping dynamics on N^2: x1 counts simple relations, x2 polynomial ones.
struct CurvePoint {
  std::uint64_t x1 = 3;
  std::uint64_t x2 = 0;
  std::vector<CurveStep> history;
};

/// F0(x) = x + (1,0), F1(x) = x + (0,1), F2(x1,x2) = (x1 + 2, 0).
CurvePoint apply_step(const CurvePoint& p, CurveStep step);

/// Replays steps from (3,0). Throws domain_error when the steps violate the pattern
/// "one or more F0, then only F1/F2".
CurvePoint replay(const std::vector<CurveStep>& steps);

/// Membership in the triangle x1 + x2 <= 2n - 1.
bool in_triangle(const CurvePoint& p, unsigned n);

struct LongestCurve {
  std::uint64_t length = 0;
  std::vector<CurveStep> witness;
};

/// Exhaustive search for the longest admissible curve that stays in the triangle; n >= 2.
LongestCurve longest_admissible(unsigned n);

struct FullerBound {
  std::uint64_t longest = 0;
  std::uint64_t k = 0;
  std::uint64_t total = 0;
  std::vector<CurveStep> witness;
};

/// K = 1 + longest and total = K + n - 2. Throws std::logic_error if total differs from (n-1)^2.
FullerBound fuller_bound(unsigned n);

}  // namespace fuller
