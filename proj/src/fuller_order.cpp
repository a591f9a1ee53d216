#include "fuller/fuller_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fuller {

SwitchSet make_switch_set(RealVector times, const real& horizon, const real& resolution) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0 || times[i] > horizon) throw domain_error("switch time outside [0, horizon]");
    if (i > 0 && !(times[i] > times[i - 1])) throw domain_error("switch times must be strictly increasing");
  }
  if (resolution < 0) throw domain_error("resolution must be non-negative");
  return SwitchSet{std::move(times), horizon, resolution};
}

StripResult strip_isolated(const RealVector& sorted, const real& eps) {
  if (!(eps > 0)) throw domain_error("strip_isolated: eps must be positive");
  StripResult out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    bool close = (i > 0 && sorted[i] - sorted[i - 1] <= eps) || (i + 1 < sorted.size() && sorted[i + 1] - sorted[i] <= eps);
    (close ? out.residual : out.isolated).push_back(sorted[i]);
  }
  return out;
}

OrderReport fuller_order(const SwitchSet& set, const real& eps, const OrderOptions& opts) {
  if (!(eps > 0)) throw domain_error("fuller_order: eps must be positive");
  if (eps < 2 * set.resolution) throw domain_error("fuller_order: eps below twice the switch-set resolution");
  if (!(opts.level_growth >= 1.0)) throw domain_error("fuller_order: level_growth must be at least 1");

  struct Item {
    real rep;
    std::vector<std::size_t> members;  // indices into set.times, ascending
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < set.times.size(); ++i) items.push_back({set.times[i], {i}});

  OrderReport report;
  report.epsilon_used = eps;
  report.level_growth = opts.level_growth;
  real scale = eps;
  for (std::size_t level = 0; !items.empty(); ++level, scale *= opts.level_growth) {
    report.layers.emplace_back();
    auto& layer = report.layers.back();
    const std::size_t m = items.size();
    std::vector<bool> isolated(m);
    for (std::size_t i = 0; i < m; ++i) {
      bool close = (i > 0 && items[i].rep - items[i - 1].rep <= scale) ||
                   (i + 1 < m && items[i + 1].rep - items[i].rep <= scale);
      isolated[i] = !close;
    }
    std::vector<std::size_t> layer_members;
    std::vector<Item> next;
    for (std::size_t i = 0; i < m;) {
      if (isolated[i]) {
        layer_members.insert(layer_members.end(), items[i].members.begin(), items[i].members.end());
        ++i;
        continue;
      }
      // A chain of non-isolated items joined by gaps <= scale; it always has two or more items.
      Item merged;
      std::size_t j = i;
      do {
        merged.members.insert(merged.members.end(), items[j].members.begin(), items[j].members.end());
        ++j;
      } while (j < m && !isolated[j] && items[j].rep - items[j - 1].rep <= scale);
      const real first = set.times[merged.members.front()];
      const real last = set.times[merged.members.back()];
      if (opts.representative == ClusterPoint::supremum) {
        merged.rep = last;
      } else {
        real sum = 0;
        for (auto idx : merged.members) sum += set.times[idx];
        merged.rep = sum / merged.members.size();
      }
      report.clusters.push_back({level + 1, merged.rep, first, last, merged.members.size()});
      next.push_back(std::move(merged));
      i = j;
    }
    std::sort(layer_members.begin(), layer_members.end());
    for (auto idx : layer_members) layer.push_back(set.times[idx]);
    items = std::move(next);
  }
  for (std::size_t k = report.layers.size(); k-- > 0;)
    if (!report.layers[k].empty()) {
      report.estimated_order = static_cast<int>(k);
      break;
    }
  for (const auto& c : report.clusters) report.accumulation_points.push_back(c.point);
  return report;
}

real auto_epsilon(const RealVector& sorted) {
  if (sorted.size() < 3) throw domain_error("auto_epsilon needs at least three times");
  std::vector<double> logs;
  real min_gap = -1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const real g = sorted[i] - sorted[i - 1];
    if (!(g > 0)) throw domain_error("auto_epsilon: times must be strictly increasing");
    if (min_gap < 0 || g < min_gap) min_gap = g;
    logs.push_back(static_cast<double>(log(g)));
  }
  std::sort(logs.begin(), logs.end());
  const std::size_t m = logs.size();
  std::vector<double> prefix(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + logs[i];
  double best = -1.0, mu_low = 0.0, mu_high = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    const double w0 = static_cast<double>(j), w1 = static_cast<double>(m - j);
    const double m0 = prefix[j] / w0, m1 = (prefix[m] - prefix[j]) / w1;
    const double between = w0 * w1 * (m1 - m0) * (m1 - m0);
    if (between > best) {
      best = between;
      mu_low = m0;
      mu_high = m1;
    }
  }
  if (mu_high - mu_low < std::log(4.0)) return min_gap / 2;
  return exp(real((mu_low + mu_high) / 2));
}

ChatterRatio chatter_ratio(const RealVector& times) {
  if (times.size() < 5) throw domain_error("chatter_ratio needs at least five switch times");
  std::vector<double> lr;
  for (std::size_t i = 2; i < times.size(); ++i) {
    const real d0 = times[i - 1] - times[i - 2], d1 = times[i] - times[i - 1];
    if (!(d0 > 0) || !(d1 > 0)) throw domain_error("chatter_ratio: times must be strictly increasing");
    lr.push_back(static_cast<double>(log(d1 / d0)));
  }
  const double n = static_cast<double>(lr.size());
  const double mean = std::accumulate(lr.begin(), lr.end(), 0.0) / n;
  double var = 0.0;
  for (double v : lr) var += (v - mean) * (v - mean);
  return {std::exp(mean), std::sqrt(var / n), times.size() - 1};
}

std::vector<double> recursion_simulate(double t1, double c, std::size_t n) {
  if (!(t1 > 0) || c < 0 || (c > 0 && !(t1 < 1.0 / c)))
    throw domain_error("recursion_simulate needs 0 < t1 < 1/c and c >= 0");
  std::vector<double> seq;
  seq.reserve(n);
  double t = t1;
  for (std::size_t i = 0; i < n; ++i) {
    seq.push_back(t);
    t = t * (1.0 - c * t);
  }
  return seq;
}

std::optional<std::size_t> divergence_check(const std::vector<double>& seq, double m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    sum += seq[i];
    if (sum >= m) return i + 1;
  }
  return std::nullopt;
}

LogFit fit_log_growth(const std::vector<double>& seq, std::size_t n_lo, std::size_t n_hi) {
  if (n_lo < 1 || n_hi > seq.size() || n_hi <= n_lo) throw domain_error("fit_log_growth: invalid index range");
  double sum = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n_hi; ++i) {
    sum += seq[i];
    if (i + 1 >= n_lo) {
      xs.push_back(std::log(static_cast<double>(i + 1)));
      ys.push_back(sum);
    }
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LogFit fit;
  fit.a = sxy / sxx;
  fit.b = my - fit.a * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.a * xs[i] + fit.b);
    ss_res += r * r;
  }
  fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::vector<AccumulationViolation> check_accumulation_conditions(const SimResult& result, const OrderReport& report,
                                                                 BracketCache& cache, double tol) {
  static const BracketWord w1("1"), w01("01"), wp01("+01"), wm01("-01"), w001("001"), w101("101");
  std::vector<const ExtremalState*> states;
  for (const auto& arc : result.arcs)
    for (const auto& s : arc.samples) states.push_back(&s);
  if (!result.final_state.q.empty()) states.push_back(&result.final_state);

  std::vector<AccumulationViolation> out;
  if (states.empty()) return out;

  struct Quantity {
    std::string name;
    std::function<real(const ExtremalState&)> eval;
  };
  const std::vector<Quantity> quantities = {
      {"h1", [&](const ExtremalState& s) { return abs(h_word(s, w1, cache)); }},
      {"h01", [&](const ExtremalState& s) { return abs(h_word(s, w01, cache)); }},
      {"min(h+01,h-01)",
       [&](const ExtremalState& s) { return std::min(abs(h_word(s, wp01, cache)), abs(h_word(s, wm01, cache))); }},
  };

  auto check_point = [&](const real& t_star, const real& first) {
    const ExtremalState* nearest = states.front();
    for (const auto* s : states)
      if (abs(s->t - t_star) < abs(nearest->t - t_star)) nearest = s;
    std::vector<const ExtremalState*> window;
    if (first < t_star)
      for (const auto* s : states)
        if (s->t >= first && s->t <= t_star) window.push_back(s);
    if (window.empty()) window = states;
    for (const auto& q : quantities) {
      const real value = q.eval(*nearest);
      real scale = value;
      for (const auto* s : window) scale = std::max(scale, q.eval(*s));
      if (value > real(tol) * scale)
        out.push_back({t_star, q.name, static_cast<double>(value), static_cast<double>(scale)});
    }
  };

  if (!report.clusters.empty()) {
    for (const auto& c : report.clusters) check_point(c.point, c.first);
  } else {
    for (const auto& p : report.accumulation_points) check_point(p, p);
  }

  for (std::size_t k = 0; k + 1 < result.arcs.size(); ++k) {
    const auto& a = result.arcs[k];
    const auto& b = result.arcs[k + 1];
    if (a.kind != ArcKind::singular || b.kind != ArcKind::singular || a.samples.empty()) continue;
    const ExtremalState& junction = a.samples.back();
    for (const BracketWord* w : {&w101, &w001}) {
      real scale = 0;
      for (const auto* arc : {&a, &b})
        for (const auto& s : arc->samples) scale = std::max(scale, real(abs(h_word(s, *w, cache))));
      const real value = abs(h_word(junction, *w, cache));
      if (value > real(tol) * scale)
        out.push_back({junction.t, "junction-h" + w->str(), static_cast<double>(value), static_cast<double>(scale)});
    }
  }
  return out;
}

}  // namespace fuller
