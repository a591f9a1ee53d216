#include "fuller/scenario_io.hpp"

#include "fuller/serialization.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

namespace fuller {

namespace {

using nlohmann::json;

std::vector<Rational> rational_list(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array()) throw domain_error(path + ": expected a list");
  if (j.size() != dim)
    throw domain_error(path + ": expected " + std::to_string(dim) + " entries, found " + std::to_string(j.size()));
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = path + "[" + std::to_string(i) + "]";
    try {
      if (j[i].is_string()) {
        out.push_back(parse_rational(j[i].get<std::string>()));
      } else if (j[i].is_number_integer()) {
        out.push_back(parse_rational(j[i].dump()));
      } else {
        throw domain_error("expected a \"p/q\" string or an integer");
      }
    } catch (const domain_error& err) {
      throw domain_error(where + ": " + err.what());
    }
  }
  return out;
}

json rational_list_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

struct OptionField {
  bool integer;
  std::function<void(SimOptions&, double)> set;
};

const std::map<std::string, OptionField>& option_fields() {
  static const std::map<std::string, OptionField> fields = {
      {"rtol", {false, [](SimOptions& o, double v) { o.rtol = v; }}},
      {"atol", {false, [](SimOptions& o, double v) { o.atol = v; }}},
      {"time_tol", {false, [](SimOptions& o, double v) { o.time_tol = v; }}},
      {"refine_tol", {false, [](SimOptions& o, double v) { o.refine_tol = v; }}},
      {"eps1", {false, [](SimOptions& o, double v) { o.eps1 = v; }}},
      {"eps2", {false, [](SimOptions& o, double v) { o.eps2 = v; }}},
      {"eps3", {false, [](SimOptions& o, double v) { o.eps3 = v; }}},
      {"arc_tol", {false, [](SimOptions& o, double v) { o.arc_tol = v; }}},
      {"max_events", {true, [](SimOptions& o, double v) { o.max_events = static_cast<std::size_t>(v); }}},
      {"accumulation_window",
       {true, [](SimOptions& o, double v) { o.accumulation_window = static_cast<std::size_t>(v); }}},
      {"accumulation_factor", {false, [](SimOptions& o, double v) { o.accumulation_factor = v; }}},
      {"lambda_min", {false, [](SimOptions& o, double v) { o.lambda_min = v; }}},
      {"lambda_max", {false, [](SimOptions& o, double v) { o.lambda_max = v; }}},
      {"max_step", {false, [](SimOptions& o, double v) { o.max_step = v; }}},
      {"event_samples", {true, [](SimOptions& o, double v) { o.event_samples = static_cast<std::size_t>(v); }}},
  };
  return fields;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PolyVectorField field_of(std::vector<std::vector<std::pair<Exponents, Rational>>> comps) {
  const std::size_t dim = comps.size();
  std::vector<Polynomial> polys;
  for (auto& c : comps) {
    std::vector<Monomial> terms;
    for (auto& [e, q] : c) terms.push_back({std::move(e), q});
    polys.push_back(Polynomial::from_terms(dim, std::move(terms)));
  }
  return PolyVectorField(std::move(polys));
}

ScenarioFile make_double_integrator() {
  ScenarioFile f;
  f.scenario.name = "double_integrator";
  f.scenario.fixture = "double_integrator";
  f.scenario.f0 = field_of({{{{0, 1}, 1}}, {}});
  f.scenario.f1 = field_of({{}, {{{0, 0}, 1}}});
  f.q0 = std::vector<Rational>{0, 0};
  f.lambda0 = std::vector<Rational>{-1, Rational(-1, 2)};
  f.t_final = Rational(1);
  return f;
}

/// Fuller's problem (minimize the integral of x1^2 with x1' = x2, x2' = u) with the running cost
/// appended as a third state x3. The normal covector keeps lambda3 = -1, so (lambda1, lambda2)
/// obey psi1' = 2 x1, psi2' = -psi1 and the switching function is psi2. The initial point lies on
/// the optimal switching curve x1 = -C x2|x2| at x2 = 1, with psi1 = C^2 and psi2 = 0.
ScenarioFile make_fuller() {
  ScenarioFile f;
  f.scenario.name = "fuller";
  f.scenario.fixture = "fuller";
  f.scenario.f0 = field_of({{{{0, 1, 0}, 1}}, {}, {{{2, 0, 0}, 1}}});
  f.scenario.f1 = field_of({{}, {{{0, 0, 0}, 1}}, {}});
  const real c = sqrt((sqrt(real(33)) - 1) / 24);
  const Rational cq = to_rational(c);
  f.q0 = std::vector<Rational>{-cq, 1, 0};
  f.lambda0 = std::vector<Rational>{cq * cq, 0, -1};
  f.t_final = Rational(2);
  f.options = {{"max_events", 60}, {"accumulation_window", 32}, {"time_tol", 1e-130}};
  return f;
}

ScenarioFile make_singular3d() {
  ScenarioFile f;
  f.scenario.name = "singular3d";
  f.scenario.fixture = "singular3d";
  f.scenario.f0 = field_of({{{{0, 1, 0}, 1}}, {{{0, 0, 1}, 1}}, {}});
  f.scenario.f1 = field_of({{}, {{{0, 0, 0}, 1}}, {{{0, 1, 0}, 1}}});
  f.q0 = std::vector<Rational>{0, 1, 0};
  f.lambda0 = std::vector<Rational>{1, -1, 1};
  f.t_final = Rational(1);
  return f;
}

/// Degree <= 2 fields in three variables. Each monomial appears with probability 1/2 and a
/// coefficient p/q with p in [-3,3] and q in [1,4]; raw engine output keeps the stream portable.
ScenarioFile make_random_poly(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return static_cast<long>(rng() % n); };
  const std::size_t dim = 3;
  std::vector<Exponents> monomials;
  for (unsigned a = 0; a <= 2; ++a)
    for (unsigned b = 0; a + b <= 2; ++b)
      for (unsigned c = 0; a + b + c <= 2; ++c) monomials.push_back({a, b, c});
  auto random_field = [&]() {
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<Monomial> terms;
      for (const auto& e : monomials) {
        if (pick(2) == 0) continue;
        const long p = pick(7) - 3;
        const long q = pick(4) + 1;
        Rational c(p, q);
        c.canonicalize();
        terms.push_back({e, c});
      }
      comps.push_back(Polynomial::from_terms(dim, std::move(terms)));
    }
    return PolyVectorField(std::move(comps));
  };
  ScenarioFile f;
  f.scenario.name = "random_poly_" + std::to_string(seed);
  f.scenario.fixture = "random_poly";
  f.scenario.f0 = random_field();
  f.scenario.f1 = random_field();
  std::vector<Rational> q, lambda;
  auto ratio = [](long p, long d) {
    Rational r(p, d);
    r.canonicalize();
    return r;
  };
  for (std::size_t i = 0; i < dim; ++i) q.push_back(ratio(pick(9) - 4, 8));
  for (std::size_t i = 0; i < dim; ++i) lambda.push_back(ratio(pick(9) - 4, 4));
  if (std::all_of(lambda.begin(), lambda.end(), [](const Rational& x) { return x == 0; })) lambda[0] = 1;
  f.q0 = q;
  f.lambda0 = lambda;
  f.t_final = Rational(1);
  return f;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"double_integrator", "fuller", "singular3d", "random_poly"};
  return names;
}

ScenarioFile parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    // Locate the byte offset as line:column for the message.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw domain_error("scenario parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                       ": " + err.what());
  }
  if (!doc.is_object()) throw domain_error("scenario: top level must be an object");
  static const std::vector<std::string> known = {"name", "dim", "fixture", "f0", "f1", "initial", "t_final", "options"};
  for (const auto& [key, value] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw domain_error("scenario: unknown field " + key);

  ScenarioFile f;
  if (!doc.contains("name") || !doc["name"].is_string()) throw domain_error("name: missing or not a string");
  f.scenario.name = doc["name"].get<std::string>();
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<std::int64_t>() <= 0)
    throw domain_error("dim: missing or not a positive integer");
  const std::size_t dim = doc["dim"].get<std::size_t>();
  if (doc.contains("fixture")) {
    if (!doc["fixture"].is_string()) throw domain_error("fixture: expected a string");
    f.scenario.fixture = doc["fixture"].get<std::string>();
    const auto& names = builtin_names();
    if (std::find(names.begin(), names.end(), f.scenario.fixture) == names.end())
      throw domain_error("fixture: unknown tag " + f.scenario.fixture);
  }
  for (const char* key : {"f0", "f1"})
    if (!doc.contains(key)) throw domain_error(std::string(key) + ": missing");
  f.scenario.f0 = field_from_json(doc["f0"], dim, "f0");
  f.scenario.f1 = field_from_json(doc["f1"], dim, "f1");
  validate_scenario(f.scenario);
  if (doc.contains("initial")) {
    const auto& init = doc["initial"];
    if (!init.is_object() || !init.contains("q") || !init.contains("lambda"))
      throw domain_error("initial: expected an object with q and lambda");
    for (const auto& [key, value] : init.items())
      if (key != "q" && key != "lambda") throw domain_error("initial: unknown field " + key);
    f.q0 = rational_list(init["q"], dim, "initial.q");
    f.lambda0 = rational_list(init["lambda"], dim, "initial.lambda");
    if (std::all_of(f.lambda0->begin(), f.lambda0->end(), [](const Rational& x) { return x == 0; }))
      throw domain_error("initial.lambda: covector must be nonzero");
  }
  if (doc.contains("t_final")) {
    const auto& t = doc["t_final"];
    try {
      if (t.is_string()) {
        f.t_final = parse_rational(t.get<std::string>());
      } else if (t.is_number_integer()) {
        f.t_final = parse_rational(t.dump());
      } else {
        throw domain_error("expected a \"p/q\" string or an integer");
      }
    } catch (const domain_error& err) {
      throw domain_error(std::string("t_final: ") + err.what());
    }
    if (*f.t_final <= 0) throw domain_error("t_final: must be positive");
  }
  if (doc.contains("options")) {
    const auto& o = doc["options"];
    if (!o.is_object()) throw domain_error("options: expected an object");
    for (const auto& [key, value] : o.items()) {
      if (!value.is_number()) throw domain_error("options." + key + ": expected a number");
      f.options[key] = value.get<double>();
    }
    try {
      make_options(f.options);
    } catch (const domain_error& err) {
      throw domain_error(std::string("options: ") + err.what());
    }
  }
  return f;
}

ScenarioFile load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const domain_error& err) {
    throw domain_error(path + ": " + err.what());
  }
}

nlohmann::json scenario_to_json(const ScenarioFile& file) {
  json doc;
  doc["name"] = file.scenario.name;
  doc["dim"] = file.dim();
  if (!file.scenario.fixture.empty()) doc["fixture"] = file.scenario.fixture;
  doc["f0"] = field_to_json(file.scenario.f0);
  doc["f1"] = field_to_json(file.scenario.f1);
  if (file.q0 && file.lambda0) doc["initial"] = {{"q", rational_list_json(*file.q0)}, {"lambda", rational_list_json(*file.lambda0)}};
  if (file.t_final) doc["t_final"] = to_string(*file.t_final);
  if (!file.options.empty()) {
    json o = json::object();
    for (const auto& [key, value] : file.options) {
      if (option_fields().at(key).integer) {
        o[key] = static_cast<std::uint64_t>(value);
      } else {
        o[key] = value;
      }
    }
    doc["options"] = o;
  }
  return doc;
}

std::string emit_scenario(const ScenarioFile& file) {
  return scenario_to_json(file).dump(2) + "\n";
}

ScenarioFile builtin(const std::string& name, std::uint64_t seed) {
  if (name == "double_integrator") return make_double_integrator();
  if (name == "fuller") return make_fuller();
  if (name == "singular3d") return make_singular3d();
  if (name == "random_poly") return make_random_poly(seed);
  throw domain_error("unknown builtin scenario " + name);
}

ScenarioFile resolve_scenario(const std::string& name_or_path, std::uint64_t seed) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin(name_or_path, seed);
  return load_scenario(name_or_path);
}

SimOptions make_options(const std::map<std::string, double>& overrides) {
  SimOptions opts;
  for (const auto& [key, value] : overrides) {
    auto it = option_fields().find(key);
    if (it == option_fields().end()) throw domain_error("unknown option " + key);
    if (!std::isfinite(value) || value < 0) throw domain_error("option " + key + " must be a finite non-negative number");
    if (it->second.integer && value != std::floor(value)) throw domain_error("option " + key + " must be an integer");
    it->second.set(opts, value);
  }
  return opts;
}

ExtremalState initial_state(const ScenarioFile& file) {
  if (!file.q0 || !file.lambda0) throw domain_error("scenario " + file.scenario.name + " has no initial state");
  ExtremalState s;
  s.t = 0;
  for (const auto& x : *file.q0) s.q.push_back(to_real(x));
  for (const auto& x : *file.lambda0) s.lambda.push_back(to_real(x));
  return s;
}

std::string scenario_hash(const ScenarioFile& file) {
  const std::string text = emit_scenario(file);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

}  // namespace fuller
