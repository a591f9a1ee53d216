#include "fuller/cli.hpp"

#include "fuller/classify.hpp"
#include "fuller/codim_dynamics.hpp"
#include "fuller/extremal.hpp"
#include "fuller/fuller_order.hpp"
#include "fuller/relations.hpp"
#include "fuller/results_io.hpp"
#include "fuller/scenario_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fuller {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw domain_error("cannot write " + path);
  f << text;
  if (!f) throw domain_error("failed writing " + path);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    parts.push_back(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::vector<Rational> parse_point(const std::string& text, const std::string& what) {
  std::vector<Rational> out;
  try {
    for (const auto& part : split_commas(text)) out.push_back(parse_rational(part));
  } catch (const domain_error& err) {
    throw domain_error(what + ": " + err.what());
  }
  return out;
}

struct SimulateArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string t_final;
  std::string output;
  std::string csv;
  std::vector<std::string> settings;
  bool samples = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const std::string started = utc_timestamp();
  ScenarioFile file = resolve_scenario(a.scenario, a.seed);
  for (const auto& kv : a.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw domain_error("--set expects key=value, got " + kv);
    try {
      file.options[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw domain_error("--set " + kv + ": value is not a number");
    }
  }
  const SimOptions opts = make_options(file.options);
  Rational t_final_q = file.t_final.value_or(Rational(1));
  if (!a.t_final.empty()) t_final_q = parse_rational(a.t_final);
  const real t_final = to_real(t_final_q);
  const ExtremalState init = initial_state(file);
  const SimResult result = simulate(file.scenario, init, t_final, opts);
  const json doc = sim_result_to_json(result, t_final, real(opts.time_tol), a.samples);

  std::string output = a.output;
  if (output.empty()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
      output = (std::filesystem::path(dir) / (file.scenario.name + ".sim.json")).string();
  }
  if (!a.csv.empty()) {
    BracketCache cache(file.scenario.f0, file.scenario.f1);
    std::ostringstream csv;
    write_trajectory_csv(csv, result, cache);
    write_text(a.csv, csv.str());
  }
  if (output.empty()) {
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  write_text(output, doc.dump(2) + "\n");
  json options = json::object();
  for (const auto& [k, v] : file.options) options[k] = v;
  json record = {{"scenario", file.scenario.name},
                 {"scenario_sha256", scenario_hash(file)},
                 {"t_final", to_string(t_final_q)},
                 {"options", options},
                 {"seed", a.seed},
                 {"sim_result", output},
                 {"started", started},
                 {"finished", utc_timestamp()}};
  if (!a.csv.empty()) record["trajectory_csv"] = a.csv;
  write_text(output + ".run.json", record.dump(2) + "\n");
  out << "switches=" << result.switch_times.size() << " arcs=" << result.arcs.size()
      << " termination=" << result.diagnostics.termination << " output=" << output << "\n";
  return kExitOk;
}

struct AnalyzeArgs {
  std::string input;
  std::string epsilon = "auto";
  std::string representative = "supremum";
  double level_growth = 4.0;
  std::string output;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const SwitchSet set = read_switch_set(a.input);
  OrderOptions opts;
  if (a.representative == "supremum") {
    opts.representative = ClusterPoint::supremum;
  } else if (a.representative == "centroid") {
    opts.representative = ClusterPoint::centroid;
  } else {
    throw domain_error("--representative must be supremum or centroid");
  }
  opts.level_growth = a.level_growth;
  real eps;
  if (a.epsilon == "auto") {
    eps = auto_epsilon(set.times);
    if (eps < 2 * set.resolution) eps = 2 * set.resolution;
  } else {
    eps = parse_real(a.epsilon);
  }
  const OrderReport report = fuller_order(set, eps, opts);
  json doc;
  doc["input"] = a.input;
  doc["epsilon_mode"] = a.epsilon == "auto" ? "auto" : "fixed";
  doc["switch_count"] = set.times.size();
  doc["order"] = order_report_to_json(report);
  if (set.times.size() >= 5) {
    doc["chatter_all"] = chatter_to_json(chatter_ratio(set.times));
    if (set.times.size() >= 11) {
      const RealVector tail(set.times.end() - 11, set.times.end());
      doc["chatter_last10"] = chatter_to_json(chatter_ratio(tail));
    }
  }
  const std::string text = doc.dump(2) + "\n";
  if (a.output.empty()) {
    out << text;
  } else {
    write_text(a.output, text);
    out << "estimated_order=" << report.estimated_order << " epsilon=" << format_real(report.epsilon_used, 20)
        << " output=" << a.output << "\n";
  }
  return kExitOk;
}

int cmd_bound(unsigned n, std::ostream& out) {
  out << bound_to_json(n, fuller_bound(n)).dump(2) << "\n";
  return kExitOk;
}

struct ClassifyArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string point;
  std::string lambda;
  bool floating = false;
  double tol = kClassifyTol;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  const ScenarioFile file = resolve_scenario(a.scenario, a.seed);
  BracketCache cache(file.scenario.f0, file.scenario.f1);
  const auto q = parse_point(a.point, "--point");
  if (q.size() != file.dim()) throw domain_error("--point: expected " + std::to_string(file.dim()) + " coordinates");
  json doc;
  if (a.floating) {
    RealVector qr;
    for (const auto& x : q) qr.push_back(to_real(x));
    doc["class"] = point_class_to_json(classify_point_3d(cache, qr, a.tol));
    doc["collinear"] = collinear_test_to_json(collinear_degeneracy_test(cache, qr, a.tol));
  } else {
    doc["class"] = point_class_to_json(classify_point_3d(cache, q));
    doc["collinear"] = collinear_test_to_json(collinear_degeneracy_test(cache, q));
  }
  if (!a.lambda.empty()) {
    const auto lambda = parse_point(a.lambda, "--lambda");
    if (lambda.size() != file.dim())
      throw domain_error("--lambda: expected " + std::to_string(file.dim()) + " coordinates");
    if (a.floating) {
      ExtremalState s;
      for (const auto& x : q) s.q.push_back(to_real(x));
      for (const auto& x : lambda) s.lambda.push_back(to_real(x));
      doc["destt"] = destt_to_json(destt_test(s, cache, a.tol));
    } else {
      doc["destt"] = destt_to_json(destt_test(cache, q, lambda));
    }
  }
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_brackets(const std::string& word_text, const std::string& scenario, std::uint64_t seed, bool decompose,
                 std::ostream& out) {
  const BracketWord word(word_text);
  const ScenarioFile file = resolve_scenario(scenario, seed);
  BracketCache cache(file.scenario.f0, file.scenario.f1);
  json doc;
  doc["word"] = word.str();
  doc["field"] = field_json_with_text(cache.field(word));
  if (decompose) {
    const WordDecomposition d = decompose_word(word);
    json terms = json::array();
    for (const auto& t : d.terms) terms.push_back({{"word", t.word.str()}, {"sign", t.sign}});
    doc["decomposition"] = {{"terms", terms}, {"J1", d.terms[d.j1].word.str()}, {"J2", d.terms[d.j2].word.str()}};
  }
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_qrel(unsigned r, const std::string& prev, const std::string& last, std::ostream& out) {
  const RelationExpr q = build_Q(r, BracketWord(prev), BracketWord(last));
  json doc = relation_to_json(q);
  doc["r"] = r;
  doc["prev"] = BracketWord(prev).str();
  doc["last"] = BracketWord(last).str();
  out << doc.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuller-phenomenon toolkit: bracket algebra, extremal simulation and Fuller-order analysis",
               "fullerctl"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate a Pontryagin extremal and record its arcs");
  simulate_cmd->add_option("--scenario", sim.scenario, "Builtin name or scenario file")->required();
  simulate_cmd->add_option("--seed", sim.seed, "Seed for random_poly");
  simulate_cmd->add_option("--t-final", sim.t_final, "Horizon (rational or decimal)");
  simulate_cmd->add_option("--output", sim.output, "Result JSON path (default: $FULLER_OUTPUT_DIR or stdout)");
  simulate_cmd->add_option("--csv", sim.csv, "Trajectory CSV path");
  simulate_cmd->add_option("--set", sim.settings, "Simulator option override key=value")->allow_extra_args(false);
  simulate_cmd->add_flag("--samples", sim.samples, "Include arc samples in the JSON output");

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Estimate the Fuller order of a switching set");
  analyze_cmd->add_option("--input", an.input, "Simulation JSON or text file of times")->required();
  analyze_cmd->add_option("--epsilon", an.epsilon, "Isolation scale, or 'auto'");
  analyze_cmd->add_option("--representative", an.representative, "supremum or centroid");
  analyze_cmd->add_option("--level-growth", an.level_growth, "Scale factor between stripping levels");
  analyze_cmd->add_option("--output", an.output, "Report JSON path (default: stdout)");

  unsigned dim = 0;
  auto* bound_cmd = app.add_subcommand("bound", "Longest admissible curve and the (n-1)^2 bound");
  bound_cmd->add_option("--dim", dim, "State dimension n >= 2")->required()->check(CLI::Range(2u, 64u));

  ClassifyArgs cl;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a point of a three-dimensional scenario");
  classify_cmd->add_option("--scenario", cl.scenario, "Builtin name or scenario file")->required();
  classify_cmd->add_option("--seed", cl.seed, "Seed for random_poly");
  classify_cmd->add_option("--point", cl.point, "Comma-separated rational coordinates")->required();
  classify_cmd->add_option("--lambda", cl.lambda, "Comma-separated covector for the accumulation test");
  classify_cmd->add_flag("--float", cl.floating, "Use floating evaluation with a relative tolerance");
  classify_cmd->add_option("--tol", cl.tol, "Relative tolerance for --float");

  std::string word, br_scenario;
  std::uint64_t br_seed = 0;
  bool decompose = false;
  auto* brackets_cmd = app.add_subcommand("brackets", "Print the bracket field f_I of a word");
  brackets_cmd->add_option("--word", word, "Word over 0, 1, +, -")->required();
  brackets_cmd->add_option("--scenario", br_scenario, "Builtin name or scenario file")->required();
  brackets_cmd->add_option("--seed", br_seed, "Seed for random_poly");
  brackets_cmd->add_flag("--decompose", decompose, "Also print the signed binary expansion");

  unsigned r = 1;
  std::string prev, last;
  auto* qrel_cmd = app.add_subcommand("qrel", "Print the expanded polynomial relation Q_r");
  qrel_cmd->add_option("--r", r, "Order r >= 1")->required()->check(CLI::Range(1u, 16u));
  qrel_cmd->add_option("--prev", prev, "Word I_(l-1)")->required();
  qrel_cmd->add_option("--last", last, "Word I_l")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    for (const auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, out);
    if (*analyze_cmd) return cmd_analyze(an, out);
    if (*bound_cmd) return cmd_bound(dim, out);
    if (*classify_cmd) return cmd_classify(cl, out);
    if (*brackets_cmd) return cmd_brackets(word, br_scenario, br_seed, decompose, out);
    if (*qrel_cmd) return cmd_qrel(r, prev, last, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace fuller
