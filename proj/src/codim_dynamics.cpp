#include "fuller/codim_dynamics.hpp"

#include <map>
#include <stdexcept>
#include <tuple>

namespace fuller {

CurvePoint apply_step(const CurvePoint& p, CurveStep step) {
  CurvePoint out = p;
  switch (step) {
    case CurveStep::f0:
      out.x1 += 1;
      break;
    case CurveStep::f1:
      out.x2 += 1;
      break;
    case CurveStep::f2:
      out.x1 += 2;
      out.x2 = 0;
      break;
  }
  out.history.push_back(step);
  return out;
}

CurvePoint replay(const std::vector<CurveStep>& steps) {
  CurvePoint p;
  bool prefix = true;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] == CurveStep::f0) {
      if (!prefix) throw domain_error("F0 step after an F1/F2 step");
    } else {
      if (i == 0) throw domain_error("an admissible curve starts with F0");
      prefix = false;
    }
    p = apply_step(p, steps[i]);
  }
  return p;
}

bool in_triangle(const CurvePoint& p, unsigned n) {
  return p.x1 + p.x2 <= 2 * static_cast<std::uint64_t>(n) - 1;
}

namespace {

enum class Phase { start, prefix, tail };

struct Search {
  unsigned n;
  std::map<std::tuple<std::uint64_t, std::uint64_t, Phase>, std::pair<std::uint64_t, int>> memo;

  std::uint64_t limit() const { return 2 * static_cast<std::uint64_t>(n) - 1; }

  /// Longest continuation from a point inside the triangle; the int is the best first step or -1.
  std::pair<std::uint64_t, int> best(std::uint64_t x1, std::uint64_t x2, Phase phase) {
    auto key = std::make_tuple(x1, x2, phase);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::pair<std::uint64_t, int> result{0, -1};
    auto consider = [&](CurveStep step, Phase next_phase) {
      CurvePoint p{x1, x2, {}};
      p = apply_step(p, step);
      if (p.x1 + p.x2 > limit()) return;
      auto [len, _] = best(p.x1, p.x2, next_phase);
      if (len + 1 > result.first) result = {len + 1, static_cast<int>(step)};
    };
    if (phase != Phase::tail) consider(CurveStep::f0, Phase::prefix);
    if (phase != Phase::start) {
      consider(CurveStep::f1, Phase::tail);
      consider(CurveStep::f2, Phase::tail);
    }
    memo.emplace(key, result);
    return result;
  }
};

}  // namespace

LongestCurve longest_admissible(unsigned n) {
  if (n < 2) throw domain_error("longest_admissible needs n >= 2");
  Search search{n, {}};
  LongestCurve out;
  std::uint64_t x1 = 3, x2 = 0;
  Phase phase = Phase::start;
  out.length = search.best(x1, x2, phase).first;
  while (true) {
    const int step = search.best(x1, x2, phase).second;
    if (step < 0) break;
    const auto s = static_cast<CurveStep>(step);
    out.witness.push_back(s);
    CurvePoint p = apply_step(CurvePoint{x1, x2, {}}, s);
    x1 = p.x1;
    x2 = p.x2;
    phase = s == CurveStep::f0 ? Phase::prefix : Phase::tail;
  }
  return out;
}

FullerBound fuller_bound(unsigned n) {
  const LongestCurve curve = longest_admissible(n);
  FullerBound b;
  b.longest = curve.length;
  b.k = 1 + curve.length;
  b.total = b.k + (n - 2);
  b.witness = curve.witness;
  const std::uint64_t expected = static_cast<std::uint64_t>(n - 1) * (n - 1);
  if (b.total != expected) throw std::logic_error("Fuller-order bound disagrees with (n-1)^2");
  return b;
}

}  // namespace fuller
