#include "fuller/results_io.hpp"

#include "fuller/serialization.hpp"

#include <fstream>
#include <sstream>

namespace fuller {

using nlohmann::json;

namespace {

std::string t_str(const real& x) {
  return format_real(x, kJsonDigits);
}

json real_list(const RealVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(t_str(x));
  return out;
}

json state_json(const ExtremalState& s) {
  return {{"t", t_str(s.t)}, {"q", real_list(s.q)}, {"lambda", real_list(s.lambda)}};
}

real parse_time(const json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_real(j.get<std::string>());
    if (j.is_number()) return real(j.get<double>());
  } catch (const std::exception& err) {
    throw domain_error(path + ": " + err.what());
  }
  throw domain_error(path + ": expected a decimal string or a number");
}

std::string polynomial_text(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool neg = t.coeff < 0;
    const Rational mag = abs(t.coeff);
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool constant = true;
    for (unsigned e : t.exponents) constant = constant && e == 0;
    if (mag != 1 || constant) os << to_string(mag);
    bool star = mag != 1 || constant;
    for (std::size_t i = 0; i < t.exponents.size(); ++i) {
      if (t.exponents[i] == 0) continue;
      if (star) os << "*";
      os << "x" << (i + 1);
      if (t.exponents[i] > 1) os << "^" << t.exponents[i];
      star = true;
    }
  }
  return os.str();
}

}  // namespace

json sim_result_to_json(const SimResult& result, const real& t_final, const real& resolution, bool include_samples) {
  json doc;
  doc["scenario"] = result.scenario;
  doc["t_final"] = t_str(t_final);
  doc["resolution"] = t_str(resolution);
  doc["switch_times"] = real_list(result.switch_times);
  json arcs = json::array();
  for (const auto& arc : result.arcs) {
    json a = {{"kind", to_string(arc.kind)}, {"t_start", t_str(arc.t_start)}, {"t_end", t_str(arc.t_end)}};
    if (include_samples) {
      json samples = json::array();
      for (std::size_t k = 0; k < arc.samples.size(); ++k) {
        json s = state_json(arc.samples[k]);
        if (k < arc.controls.size()) s["u"] = t_str(arc.controls[k]);
        samples.push_back(std::move(s));
      }
      a["samples"] = std::move(samples);
    }
    arcs.push_back(std::move(a));
  }
  doc["arcs"] = std::move(arcs);
  json events = json::array();
  for (const auto& e : result.events) events.push_back({{"t", t_str(e.t)}, {"kind", e.kind}, {"detail", e.detail}});
  doc["events"] = std::move(events);
  const auto& d = result.diagnostics;
  doc["diagnostics"] = {{"max_hamiltonian_drift", d.max_hamiltonian_drift},
                        {"renormalizations", d.renormalizations},
                        {"steps_accepted", d.steps_accepted},
                        {"steps_rejected", d.steps_rejected},
                        {"termination", d.termination}};
  doc["final_state"] = state_json(result.final_state);
  return doc;
}

void write_trajectory_csv(std::ostream& out, const SimResult& result, BracketCache& cache) {
  const std::size_t n = cache.dim();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",q" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",lambda" << i;
  out << ",u,h1,h01\n";
  const BracketWord w1("1"), w01("01");
  for (const auto& arc : result.arcs) {
    for (std::size_t k = 0; k < arc.samples.size(); ++k) {
      const auto& s = arc.samples[k];
      out << format_real(s.t, 20);
      for (const auto& x : s.q) out << "," << format_real(x, 20);
      for (const auto& x : s.lambda) out << "," << format_real(x, 20);
      const real u = k < arc.controls.size() ? arc.controls[k] : real(0);
      out << "," << format_real(u, 20) << "," << format_real(h_word(s, w1, cache), 20) << ","
          << format_real(h_word(s, w01, cache), 20) << "\n";
    }
  }
}

SwitchSet switch_set_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("switch_times")) throw domain_error("input: missing switch_times");
  const auto& times_json = doc["switch_times"];
  if (!times_json.is_array()) throw domain_error("switch_times: expected a list");
  RealVector times;
  for (std::size_t i = 0; i < times_json.size(); ++i)
    times.push_back(parse_time(times_json[i], "switch_times[" + std::to_string(i) + "]"));
  real horizon = times.empty() ? real(0) : times.back();
  if (doc.contains("t_final")) horizon = parse_time(doc["t_final"], "t_final");
  real resolution = 0;
  if (doc.contains("resolution")) resolution = parse_time(doc["resolution"], "resolution");
  return make_switch_set(std::move(times), horizon, resolution);
}

SwitchSet read_switch_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& err) {
      throw domain_error(path + ": " + err.what());
    }
    try {
      return switch_set_from_json(doc);
    } catch (const domain_error& err) {
      throw domain_error(path + ": " + err.what());
    }
  }
  RealVector times;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    try {
      times.push_back(parse_real(line.substr(b, e - b + 1)));
    } catch (const std::exception& err) {
      throw domain_error(path + ":" + std::to_string(lineno) + ": " + err.what());
    }
  }
  real horizon = times.empty() ? real(0) : times.back();
  return make_switch_set(std::move(times), horizon, real(0));
}

json order_report_to_json(const OrderReport& report) {
  json doc;
  doc["estimated_order"] = report.estimated_order;
  doc["epsilon_used"] = t_str(report.epsilon_used);
  doc["level_growth"] = report.level_growth;
  json layers = json::array();
  for (const auto& layer : report.layers) layers.push_back(real_list(layer));
  doc["layers"] = std::move(layers);
  doc["accumulation_points"] = real_list(report.accumulation_points);
  json clusters = json::array();
  for (const auto& c : report.clusters)
    clusters.push_back({{"level", c.level},
                        {"point", t_str(c.point)},
                        {"first", t_str(c.first)},
                        {"last", t_str(c.last)},
                        {"members", c.members}});
  doc["clusters"] = std::move(clusters);
  return doc;
}

json chatter_to_json(const ChatterRatio& ratio) {
  return {{"ratio", ratio.ratio}, {"dispersion", ratio.dispersion}, {"intervals", ratio.intervals}};
}

json point_class_to_json(const PointClass& pc) {
  json doc;
  for (std::size_t i = 0; i < 6; ++i) doc["A" + std::to_string(i + 1)] = pc.a[i];
  doc["W"] = pc.w;
  doc["C"] = pc.c;
  doc["exact"] = pc.exact;
  if (!pc.exact) doc["tol"] = pc.tol;
  doc["rank_f1_f01"] = pc.rank_f1_f01;
  doc["rank_f0_f1"] = pc.rank_f0_f1;
  json wedges = json::array();
  for (const auto& w : pc.wedges) wedges.push_back({{"label", w.label}, {"value", w.text}, {"zero", w.zero}});
  doc["wedges"] = std::move(wedges);
  return doc;
}

json collinear_test_to_json(const CollinearTest& test) {
  json doc = {{"in_L1", test.in_l1}, {"in_L2", test.in_l2}};
  doc["a"] = test.a ? json(to_string(*test.a)) : json(nullptr);
  doc["determinant"] = test.determinant ? json(to_string(*test.determinant)) : json(nullptr);
  return doc;
}

json destt_to_json(const DesttReport& report) {
  return {{"branch", to_string(report.branch)},
          {"h0101", report.h0101_text},
          {"combination", report.combination_text}};
}

json bound_to_json(unsigned n, const FullerBound& bound) {
  json witness = json::array();
  for (auto s : bound.witness) witness.push_back(to_string(s));
  return {{"n", n}, {"longest", bound.longest}, {"K", bound.k}, {"total", bound.total}, {"witness", witness}};
}

json relation_to_json(const RelationExpr& r) {
  json terms = json::array();
  for (const auto& [mono, coeff] : r.terms()) {
    json leaves = json::array();
    for (const auto& w : mono) leaves.push_back(w.str());
    terms.push_back({{"leaves", leaves}, {"coeff", coeff.get_str()}});
  }
  return {{"text", r.str()}, {"terms", terms}};
}

json field_json_with_text(const PolyVectorField& f) {
  json text = json::array();
  for (const auto& c : f.components()) text.push_back(polynomial_text(c));
  return {{"components", text}, {"canonical", field_to_json(f)}};
}

}  // namespace fuller
